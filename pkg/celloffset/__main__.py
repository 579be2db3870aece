"""Python entry point."""

from . import main

main.main()

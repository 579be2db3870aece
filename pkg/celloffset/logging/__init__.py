"""Logger factory shared by every celloffset subpackage."""

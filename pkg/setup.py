from setuptools import setup, find_packages
from celloffset import __version__

with open("README.md", "r") as f:
    long_description = f.read()

setup(
    name="celloffset",
    version=__version__,
    author="",
    author_email="",
    description="equilibria and threshold design for the WiFi/3G association game",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Intended Audience :: Telecommunications Industry",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3.7",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Topic :: System :: Networking",
    ],
    install_requires=[
        "numpy",
        "scipy",
        "docopt",
    ],
    extras_require={"test": ["pytest", "hypothesis", "coverage"]},
    entry_points={"console_scripts": ["pyoffset=celloffset.main:main"]},
    python_requires=">=3.7",
)

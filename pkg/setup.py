#!/usr/bin/env python3
"""
Arithmetic Index Toolkit - Package Setup

Install with: pip install -e .[dev]
"""

from setuptools import setup, find_packages
from pathlib import Path

# Read README for long description
readme_path = Path(__file__).parent / "README.md"
long_description = readme_path.read_text() if readme_path.exists() else ""

setup(
    name="arith-index",
    version="1.0.0",
    author="Arithmetic Index Toolkit",
    author_email="",
    description="Arithmetic factors, runs and arithmetic indices of generalized Thue-Morse words",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.10",
    install_requires=[
        "numpy>=1.24.0",
        "pydantic>=2.5.0",
        "pyyaml>=6.0.1",
        "rich>=13.7.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.0",
            "hypothesis>=6.90.0",
            "black>=24.0.0",
            "mypy>=1.8.0",
            "ruff>=0.1.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "arith-index=arithindex.__main__:main",
        ],
    },
)

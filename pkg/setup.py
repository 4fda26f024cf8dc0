"""
Setup configuration for Lens Synth
"""

from setuptools import setup, find_packages

setup(
    name="lens_synth",
    version="0.1.0",
    description="Symmetric string lenses and their synthesis, with an MCP server",
    author="Workshop",
    packages=find_packages(),
    package_dir={"": "."},
    install_requires=[
        "fastmcp",
        "lark",
        "click",
    ],
    extras_require={
        "dev": [
            "pytest",
            "pytest-asyncio",
            "pytest-mock",
            "hypothesis",
        ]
    },
    entry_points={
        "console_scripts": [
            "lens-synth=src.cli:main",
        ]
    },
    python_requires=">=3.10",
)

"""Setup script for hermblock."""
from setuptools import setup, find_packages

setup(
    name="hermblock",
    version="0.1.0",
    description="Isometric decompositions and spectral certificates for PSD block matrices",
    packages=find_packages(include=["src", "src.*"]),
    python_requires=">=3.9",
    install_requires=[
        "python-dotenv>=1.0.0",
        "pydantic>=2.0.0",
        "rich>=13.0.0",
        "pyyaml>=6.0.1",
        "numpy>=1.24.0",
        "scipy>=1.10.0",
    ],
    entry_points={
        "console_scripts": [
            "hermblock=src.main:main",
        ],
    },
)

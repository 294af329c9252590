from setuptools import setup, find_packages

setup(
    name="toeplitz-framework",
    version="0.1.0",
    description="Multi-bordered, semi-framed and framed Toeplitz determinants",
    long_description="""
        A numerical library and command-line harness for Toeplitz determinants
        with borders and frames. It evaluates the determinants exactly, checks
        the Dodgson condensation identities that relate them to bi-orthogonal
        polynomials and Riemann-Hilbert data, and compares them against their
        strong Szegő asymptotics.
    """,
    author="Toeplitz Framework Team",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        "pydantic>=2.0.0",
        "jsonschema>=4.0",
        "PyYAML>=6.0",
    ],
    extras_require={
        "logging": ["structlog>=23.1"],
        "test": ["pytest>=7.0", "hypothesis>=6.0"],
    },
    entry_points={
        "console_scripts": [
            "toeplitz-harness=toeplitz_framework.harness.cli:main",
        ],
    },
)

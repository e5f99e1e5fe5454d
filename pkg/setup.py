from setuptools import setup, find_packages

setup(
    name="loewnerlab",
    version="0.1.0",
    author="Loewnerlab Team",
    description="Numerical laboratory for the chordal Loewner equation with Lip(1/2) driving terms",
    packages=find_packages(exclude=["tests*", "examples*"]),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.11",
    ],
    extras_require={"dev": ["ruff", "pytest>=7.0"]},
    entry_points={"console_scripts": ["loewnerlab = loewnerlab.cli:main"]},
    python_requires=">=3.10",
)

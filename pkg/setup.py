from pathlib import Path
import setuptools

setuptools.setup(
    name="dualhawkes",
    version="0.1.0",
    description="Separate moreishness from utility in user return times",
    long_description=Path("README.md").read_text(),
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests"]),
    package_data={
        "dualhawkes": ["py.typed"],
    },
    install_requires=[
        "numba>=0.59",
        "numpy>=1.22",
        "scipy>=1.8",
        "tqdm>=4.60",
    ],
    entry_points={
        "console_scripts": ["dualhawkes=dualhawkes.commands:main"],
    },
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    python_requires=">=3.9",
)

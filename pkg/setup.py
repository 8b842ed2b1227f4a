from setuptools import find_packages, setup

setup(
    name="GravBell",
    version="0.0.1",
    packages=find_packages(include=["GravBell", "GravBell.*"]),
    package_data={"GravBell": ["default_config.yaml"]},
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.20",
        "scipy",
        "astropy",
        "gammapy>=1.0",
        "loguru",
        "pyyaml",
    ],
    extras_require={
        "test": ["pytest", "hypothesis"],
        "dev": ["black", "flake8", "isort"],
    },
    entry_points={"console_scripts": ["gravbell=GravBell.cli:main"]},
)

from setuptools import setup, find_packages

setup(
    name="carpetres",
    version="0.1.0",
    author="carpetres contributors",
    description="Effective resistance and resistance scaling of 4N-carpet pre-fractals",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(include=["carpetres", "carpetres.*"]),
    include_package_data=True,
    install_requires=[
        "python-dotenv>=1.0.0",
        "pydantic>=2.7.0",
        "click>=8.1.0",
        "rich>=13.0.0",
        "numpy>=1.24",
        "scipy>=1.12",
    ],
    entry_points={
        "console_scripts": [
            "carpetres=carpetres.cli:main",
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    python_requires=">=3.10",
)

from setuptools import find_packages, setup

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="depth2face",
    version="0.1.0",
    description="Deterministic conditional GAN translating depth maps into RGB faces",
    author="Reinier van Linschoten",
    author_email="mail@reiniervl.com",
    maintainer="Reinier van Linschoten",
    maintainer_email="mail@reiniervl.com",
    packages=find_packages(include=("depth2face", "depth2face.*")),
    python_requires=">=3.7",
    install_requires=[
        "numpy>=1.23.2",
        "pandas>=1.5.0",
        "openpyxl>=3.0.9",
        "tqdm>=4.64.0",
        "Pillow>=9.1.0",
        # importlib.metadata was only introduced in Python 3.8, but the
        # "importlib-metadata" package provides it for older Python versions.
        'importlib-metadata >= 1.0 ; python_version < "3.8"',
    ],
    tests_require=["pytest", "hypothesis"],
    entry_points={"console_scripts": ["depth2face=depth2face.cli.main:main"]},
    license="MIT",
    long_description=long_description,
    long_description_content_type="text/markdown",
)

#!/usr/local/bin/python3

import re
from pathlib import Path

from setuptools import setup, find_packages

HERE = Path(__file__).parent

README = (HERE / "README.md").read_text(encoding="utf-8")
CHANGELOG = (HERE / "CHANGELOG.md").read_text(encoding="utf-8")

# read the version without importing the package (its dependencies may be missing)
VERSION = re.search(r"__version__ = '([^']+)'", (HERE / "rtaudit" / "__init__.py").read_text()).group(1)

setup_args = dict(
    name="rtaudit",
    version=VERSION,
    description="Single-trial classification audit of reaction-time congruency experiments",
    long_description=README + "\n\n" + CHANGELOG,
    long_description_content_type="text/markdown",
    license="MIT",
    keywords=["reaction time", "congruency", "classification", "effect size", "t-test", "simulation"],
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    entry_points={
        "console_scripts": ["rtaudit=rtaudit.cli:main"]
    }
)

install_requires = [
    "numpy>=1.17",
    "scipy>=1.6",
    "pandas>=1.5",
    "gdspy>=1.6",
    "xmltodict>=0.12",
    "joblib>=1.0"
]

extras_require = {
    "tests": ["pytest>=7"]
}

if __name__ == '__main__':
    setup(**setup_args,
        install_requires=install_requires,
        extras_require=extras_require,
        include_package_data=True)

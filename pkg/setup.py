"""
pulseshaper
Shaped control pulse synthesis for coupled spin-qubit systems.
"""
import re

from setuptools import setup, find_packages

short_description = __doc__.split("\n")

try:
    with open("README.md", "r") as handle:
        long_description = handle.read()
except IOError:
    long_description = "\n".join(short_description[2:]),

with open("pulseshaper/__init__.py", "r") as handle:
    version = re.search(r"^__version__ = '([^']+)'", handle.read(), re.MULTILINE).group(1)


setup(
    # Self-descriptive entries which should always be present
    name='pulseshaper',
    description=short_description[1],
    long_description=long_description,
    long_description_content_type="text/markdown",
    version=version,
    license='MIT',

    # Which Python importable modules should be included when your package is installed
    packages=find_packages(exclude=['integration_tests', 'integration_tests.*']),

    # The demo configs and the reference files used by the tests.
    include_package_data=True,
    package_data={
        'pulseshaper': ['data/demo/*.json', 'data/test/*/*']
    },

    entry_points={
        'console_scripts': ['pulseshaper=pulseshaper.cli:main']
    },

    install_requires=[
        'numpy',
        'pandas >=1.5',
        'pint',
        'dask >=2.6.0',
        'distributed >=2.6.0',
        'setuptools'
    ],
    python_requires=">=3.8",

    zip_safe=False,
)

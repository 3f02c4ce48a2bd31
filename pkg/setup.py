import os
import re

from setuptools import setup, find_packages

# README read-in
from os import path
this_directory = path.abspath(path.dirname(__file__))
with open(path.join(this_directory, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()
# END README read-in


def get_version():
    with open(os.path.join(this_directory, 'qdiscord', '__init__.py'), encoding='utf-8') as f:
        return re.search(r"^__version__ = '([^']+)'", f.read(), re.M).group(1)


setup(
    name='qdiscord',
    version=get_version(),
    packages=find_packages(exclude=['tests']),
    description="Quantum discord, correlation rank and simulated tomography of two-qubit states under noise.",
    long_description=long_description,
    long_description_content_type='text/x-rst',
    install_requires=[
        'numpy >= 1.17.0',
        'scipy >= 1.4.0'
    ],
    entry_points={
        'console_scripts': [
            'qdiscord = qdiscord.cli:main',
        ],
    },
    classifiers=[
        'Development Status :: 4 - Beta',
        'Programming Language :: Python',
        'License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)',
        'Topic :: Scientific/Engineering :: Physics',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9'
    ],
)

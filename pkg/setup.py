# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""Build script for setuptools."""

import setuptools

with open('README.md', 'r') as fh:
    long_description = fh.read()

setuptools.setup(
    name='hitchindod',
    version='1.0.0',
    author='Petr Pavlu',
    author_email='setup@dagobah.cz',
    description='Verification harness for Fuchsian domains of discontinuity',
    long_description=long_description,
    long_description_content_type='text/markdown',
    url='https://github.com/petrpavlu/hitchindod',
    classifiers=[
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    python_requires='>=3.8',
    # NumPy provides the dense linear algebra and random generators, SciPy the
    # ODE integrator, matrix exponentials and principal angles.
    install_requires=[
        'numpy',
        'scipy',
    ],
    entry_points={
        'console_scripts': [
            'verify = hitchindod.cli.__main__:main',
        ],
    },
    # Include all packages in the installation with the exception of tests.
    packages=setuptools.find_packages(exclude=['tests']),
)

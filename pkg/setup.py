from setuptools import setup, find_packages
from os import path

here = path.abspath(path.dirname(__file__))

setup(
    name='matroidwalks',

    version='0.0.1',

    description='Random walks on weighted matroid complexes: entropy contraction, '
                'log-Sobolev constants, mixing and negative dependence checks',
    long_description="",

    license='GPL3',

    classifiers=[
        'Development Status :: 3 - Alpha',
    ],

    packages=find_packages(exclude=['contrib', 'docs', 'tests']),

    install_requires=['numpy', 'pandas', 'scipy', 'cached-property', 'networkx'],

    extras_require={
        'test': ['pytest']
    },

    # Bundled matroid catalog
    package_data={
        'matroidwalks': ['data/*.json'],
    },

    data_files=[],

    entry_points={
        'console_scripts': [
            'matroidwalks=matroidwalks.cli:main',
        ],
    },
)

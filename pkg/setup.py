"""
Main setup file for the library
"""
from setuptools import setup, find_packages

setup(
    name='csm',
    version='0.1',
    description='Causal structure learning, planning and structure mapping '
                'in the Triggers gridworld',
    author='Michal Kononenko',
    author_email='michalkononenko@gmail.com',
    packages=find_packages(exclude=["test", "test.*"]),
    install_requires=[
        'numpy>=1.22',
        'scipy>=1.8',
        'networkx>=2.6',
        'docopt>=0.6.2',
    ],
    entry_points={
        'console_scripts': ['csm = csm.cli:main'],
    }
)

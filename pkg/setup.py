from setuptools import setup, find_packages

setup(
    name='ptscatter',
    version='0.1',
    packages=find_packages(where='src'),
    package_dir={'': 'src'},
    package_data={'ptscatter': ['config/*.yaml']},
    install_requires=[
        'numpy',
        'PyYAML',
        'scipy',
        'termcolor',
        'tqdm',
    ],
    extras_require={
        'test': ['mpmath', 'pytest'],
    },
    entry_points={
        'console_scripts': ['ptscatter = ptscatter.cli:main'],
    },
)

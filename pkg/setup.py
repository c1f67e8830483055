from setuptools import setup, find_packages
setup(
        name = 'cutset_lab',
        version = '0.1.0',
        description = 'minimal cutsets, closeness and growth on exact windows of infinite graphs',
        platforms = ['any'],
        packages = find_packages(exclude = ['tests']),
        install_requires = [
                'numpy',
                'scipy',
                'networkx',
                'tqdm',
                'pyyaml',
                'pydantic>=2'
        ],
        extras_require = { 'test': ['pytest', 'hypothesis'] },
        entry_points = { 'console_scripts': ['cutset-lab=cutset_lab.cli:main'] }
)

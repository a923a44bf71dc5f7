import os.path

from setuptools import find_packages, setup

with open('requirements.txt', 'rt') as f:
    requirements = f.read().splitlines()

version = {}
with open(os.path.join('krcycles', '_version.py'), 'rt') as f:
    exec(f.read(), version)

setup(name='krcycles',
      version=version['__version__'],
      packages=find_packages(),
      include_package_data=True,
      package_data={'krcycles': ['tests/*.json']},
      install_requires=requirements,
      python_requires='>=3.8',
      description='Spanning K_r-cycles and F-cycles in random graphs',
      entry_points={'console_scripts': ['krcycles=krcycles.cli:main']})

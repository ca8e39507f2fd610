from setuptools import find_packages
from setuptools import setup

setup(name='pylsc',
      version='0.1',
      description='Learned structured communication for multi-agent Q-learning',
      packages=find_packages(exclude=['examples', 'examples.*']),
      install_requires=[
          'numpy',
          'scipy >= 1.0.0',
          'torch >= 1.0.0',
          'networkx',
          'PyYAML',
      ],
      entry_points={
          'console_scripts': ['pylsc=pylsc.cli:main'],
      },
      )

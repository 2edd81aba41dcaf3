import os
from setuptools import setup, find_packages
import foldflip


with open(os.path.join(os.path.dirname(__file__), 'README.rst')) as fobj:
    readme = fobj.read()

setup(name='foldflip',
      version=foldflip.__version__,
      author='Foldflip contributors',
      license='MIT',
      description='Mountain-valley assignments of origami crease patterns: '
                  'sampling, flip graphs and mixing',
      platforms='any',
      long_description=readme,
      packages=find_packages(),
      python_requires='>=3.9',
      tests_require=['tox'],
      install_requires=[
          'mando>=0.6,<0.8',
          'colorama>=0.4.1',
          'numpy>=1.22',
          'networkx>=2.6',
      ],
      extras_require={
          'toml': ["tomli>=2.0.1"]
      },
      entry_points={
          'console_scripts': ['foldflip = foldflip:main'],
      },
      keywords='origami crease pattern flat folding markov chain mixing',
      classifiers=[
          'Development Status :: 4 - Beta',
          'Environment :: Console',
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: MIT License',
          'Operating System :: OS Independent',
          'Programming Language :: Python',
          'Programming Language :: Python :: 3',
          'Programming Language :: Python :: 3.9',
          'Programming Language :: Python :: 3.10',
          'Programming Language :: Python :: 3.11',
          'Programming Language :: Python :: 3.12',
          'Topic :: Scientific/Engineering :: Mathematics',
          'Topic :: Utilities',
      ]
)

import os
from setuptools import setup

from amoeba_sim import __version__


def read(filename):
    fullpath = os.path.join(os.path.dirname(__file__), filename)
    return open(fullpath, 'r', encoding='utf-8').read()


setup(name='amoeba-sim',
      version=__version__,
      description='Deterministic simulator for self-organizing hexagonal particle systems.',
      long_description=read('README.md'),
      long_description_content_type='text/markdown',
      license='Apache License 2.0',
      packages=['amoeba_sim'],
      scripts=['bin/amoeba-sim'],
      tests_require=open('test-requirements.txt').readlines(),
      install_requires=open('requirements.txt').readlines(),
      python_requires='>=3.8',
      classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'License :: OSI Approved :: Apache Software License',
        'Topic :: Scientific/Engineering',
        'Operating System :: OS Independent',
      ])

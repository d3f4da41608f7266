# Copyright 2026 The univspec Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Setup configuration specifying univspec dependencies."""

from setuptools import find_namespace_packages
from setuptools import setup

with open('README.md', 'r', encoding='utf-8') as fh:
  long_description = fh.read()

setup(
    name='univspec',
    version='0.1.0',
    description=('Universal spectral adversarial perturbations for deformable '
                 '3D shape classifiers'),
    long_description=long_description,
    long_description_content_type='text/markdown',
    author='The univspec Authors',
    packages=find_namespace_packages(include=['univspec', 'univspec.*']),
    python_requires='>=3.8',
    install_requires=[
        'absl-py',
        'attrs',
        'humanize',
        'immutabledict',
        'numpy>=1.20',
        'scipy>=1.7',
        'termcolor',
        'torch>=1.10',
    ],
    entry_points={
        'console_scripts': ['univspec = univspec.cli.cli:entrypoint',],
    },
)

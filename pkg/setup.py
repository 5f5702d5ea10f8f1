# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

from setuptools import setup

version = open("commentaug/version").read().rstrip()
readme = open("README.md", encoding="utf8").read()
requirements = open("requirements.txt", encoding="utf8").readlines()
requirements_build = open("requirements-dev.txt", encoding="utf8").readlines()

setup(
    name="commentaug",
    version=version,
    packages=[
        "commentaug",
        "commentaug.backend",
        "commentaug.core",
        "commentaug.corpus",
        "commentaug.decoder",
        "commentaug.executor",
    ],
    license="MIT",
    description="Comment density analysis and constrained comment augmentation "
    "for code pre-training corpora",
    long_description=readme,
    long_description_content_type="text/markdown",
    setup_requires=["setuptools>=38.6.0"],
    install_requires=requirements,
    package_data={
        "commentaug": ["py.typed", "version"],
    },
    extras_require={"build": requirements_build},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: POSIX :: Linux",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Topic :: Software Development :: Libraries",
    ],
    entry_points={"console_scripts": ["commentaug=commentaug.executor.cli:main"]},
)

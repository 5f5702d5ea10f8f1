# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# Sphinx configuration for the commentaug user guide:
#
#   sphinx-build docs docs/_build/html

import os

import sphinx_kr_theme

_here = os.path.dirname(os.path.abspath(__file__))

project = "commentaug"
author = "commentaug developers"
copyright = "Meta Platforms, Inc"

with open(os.path.join(_here, "..", "commentaug", "version")) as _version_file:
    version = release = _version_file.read().strip()

master_doc = "index"
source_suffix = ".rst"
language = "en"
exclude_patterns = ["_build"]

# Unmarked literal blocks are shell sessions.
highlight_language = "none"

html_theme = "kr"
html_theme_path = [sphinx_kr_theme.get_html_theme_path()]
html_title = "commentaug {}".format(version)
html_sidebars = {"**": ["globaltoc.html", "searchbox.html"]}

man_pages = [
    (
        "command_line/index",
        "commentaug",
        "comment density analysis and comment augmentation for code corpora",
        [author],
        1,
    )
]

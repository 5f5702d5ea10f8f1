# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

from .lexer import (  # noqa
    classify_lines,
    classify_prefix,
    comment_counts,
    comment_density,
    CommentSpan,
    LineClass,
    PrefixClass,
    scan,
    strip_comments,
)
from .syntax import (  # noqa
    CommentSyntax,
    Language,
    supported_languages,
    syntax_for,
    UnsupportedLanguage,
)

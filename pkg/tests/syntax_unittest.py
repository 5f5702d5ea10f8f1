# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import testslide

from commentaug.core.syntax import (
    BlockMarker,
    Language,
    supported_languages,
    syntax_for,
    UnsupportedLanguage,
)


class LanguageTest(testslide.TestCase):
    def test_parse_accepts_values_and_members(self):
        self.assertIs(Language.parse("python"), Language.PYTHON)
        self.assertIs(Language.parse(" C-Sharp "), Language.C_SHARP)
        self.assertIs(Language.parse(Language.RUST), Language.RUST)

    def test_parse_rejects_unknown_languages(self):
        for value in ("haskell", "", None, 3):
            with self.subTest(value=value):
                with self.assertRaisesRegex(UnsupportedLanguage, "Unsupported"):
                    Language.parse(value)

    def test_str_is_the_corpus_value(self):
        self.assertEqual(str(Language.TYPESCRIPT), "typescript")
        self.assertEqual(Language.CPP.fence_tag, "cpp")


class SyntaxForTest(testslide.TestCase):
    def test_every_language_has_one_entry(self):
        self.assertEqual(len(supported_languages()), 10)
        for language in supported_languages():
            with self.subTest(language=language):
                self.assertIs(syntax_for(language).language, language)
                self.assertIs(syntax_for(language.value).language, language)

    def test_python(self):
        syntax = syntax_for("python")
        self.assertEqual(syntax.line_markers, ("#",))
        self.assertEqual(
            [(m.open, m.close) for m in syntax.block_markers],
            [("'''", "'''"), ('"""', '"""')],
        )
        self.assertTrue(all(m.statement_only for m in syntax.block_markers))
        self.assertFalse(syntax.nests_blocks)

    def test_rust(self):
        syntax = syntax_for("rust")
        self.assertEqual(syntax.line_markers, ("//",))
        self.assertEqual(
            [(m.open, m.close) for m in syntax.block_markers], [("/*", "*/")]
        )
        self.assertTrue(syntax.nests_blocks)

    def test_ruby_block_is_column_zero(self):
        syntax = syntax_for("ruby")
        self.assertEqual(
            syntax.block_markers, (BlockMarker("=begin", "=end", column_zero=True),)
        )

    def test_php_has_two_line_markers(self):
        self.assertEqual(syntax_for("php").line_markers, ("//", "#"))

    def test_comment_openers(self):
        self.assertEqual(syntax_for("go").comment_openers, ("//", "/*"))
        self.assertIsNone(syntax_for("go").block_marker("/**"))

    def test_unsupported(self):
        with self.assertRaises(UnsupportedLanguage) as cm:
            syntax_for("haskell")
        self.assertEqual(cm.exception.language, "haskell")

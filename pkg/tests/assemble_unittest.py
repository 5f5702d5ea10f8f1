# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import os
import random
import tempfile

import testslide

from commentaug.core.lexer import comment_density
from commentaug.core.syntax import Language, syntax_for
from commentaug.corpus.io import CodeDocument, SchemaError
from commentaug.executor.assemble import (
    assemble,
    AssemblyCounts,
    DatasetVariant,
    strip_corpus,
)
from commentaug.executor.lib import AugmentedRecord
from commentaug.filters import FilterVerdict, VerdictKind

from .fixtures import ALL_LANGUAGES, random_document, read_jsonl, write_jsonl

_REJECTIONS = (
    FilterVerdict(VerdictKind.IMPLICIT_EOT),
    FilterVerdict(VerdictKind.MARKDOWN_REJECT, reason="missing_open_fence"),
    FilterVerdict(VerdictKind.LENGTH_REJECT, ratio=1.5),
    FilterVerdict(VerdictKind.TOO_LONG),
    None,
)


_HASH = frozenset({Language.PYTHON, Language.RUBY})


def _commented(document):
    marker = "#" if Language.parse(document.language) in _HASH else "//"
    return f"{marker} explained\n{document.content}"


def _record(document, passed, rejection=None):
    if passed:
        return AugmentedRecord(
            document,
            FilterVerdict(VerdictKind.PASS, ratio=0.0),
            generated=_commented(document),
        )
    if rejection is None:
        return AugmentedRecord(document, None, error="connection reset")
    return AugmentedRecord(document, rejection)


class AssembleTest(testslide.TestCase):
    def setUp(self):
        super().setUp()
        tmpdir = tempfile.TemporaryDirectory()
        self.addCleanup(tmpdir.cleanup)
        self.tmpdir = tmpdir.name
        rng = random.Random("assemble")
        self.records = []
        for index in range(1000):
            language = ALL_LANGUAGES[index % len(ALL_LANGUAGES)]
            document = random_document(rng, language, f"doc-{index}")
            passed = index % 5 < 3
            rejection = _REJECTIONS[index // 5 % len(_REJECTIONS)]
            self.records.append(_record(document, passed, rejection))
        self.records_path = self.path("records.jsonl")
        write_jsonl(self.records_path, (r.to_json() for r in self.records))

    def path(self, name):
        return os.path.join(self.tmpdir, name)

    def assemble(self, variant):
        out_path = self.path(f"{variant.value}.jsonl")
        counts = assemble(self.records_path, variant, out_path)
        return counts, read_jsonl(out_path)

    def test_remove_keeps_only_commented_pass_records(self):
        counts, written = self.assemble(DatasetVariant.REMOVE)
        self.assertEqual(counts, AssemblyCounts(written=600, dropped=400))
        expected = [r for r in self.records if r.passed]
        self.assertEqual(
            [(obj["id"], obj["content"]) for obj in written],
            [(r.document.id, r.generated) for r in expected],
        )

    def test_restore_substitutes_originals_byte_for_byte(self):
        counts, written = self.assemble(DatasetVariant.RESTORE)
        self.assertEqual(counts, AssemblyCounts(written=1000, substituted=400))
        for record, obj in zip(self.records, written):
            expected = record.generated if record.passed else record.document.content
            self.assertEqual(obj["content"], expected)
            self.assertEqual(obj["id"], record.document.id)

    def test_absent_strips_every_comment(self):
        counts, written = self.assemble(DatasetVariant.ABSENT)
        self.assertEqual(counts, AssemblyCounts(written=1000))
        for obj in written:
            syntax = syntax_for(obj["language"])
            self.assertEqual(comment_density(obj["content"], syntax), 0.0)

    def test_passthrough_writes_originals(self):
        counts, written = self.assemble(DatasetVariant.PASSTHROUGH)
        self.assertEqual(counts, AssemblyCounts(written=1000))
        self.assertEqual(
            [obj["content"] for obj in written],
            [r.document.content for r in self.records],
        )

    def test_original_remove_keeps_originals_of_pass_records(self):
        counts, written = self.assemble(DatasetVariant.ORIGINAL_REMOVE)
        self.assertEqual(counts, AssemblyCounts(written=600, dropped=400))
        self.assertEqual(
            [obj["content"] for obj in written],
            [r.document.content for r in self.records if r.passed],
        )

    def test_accepts_variant_names(self):
        counts = assemble(self.records_path, "remove", self.path("out.jsonl"))
        self.assertEqual(counts.written, 600)

    def test_small_example(self):
        documents = [
            CodeDocument(name, "python", f"{name} = 1\n") for name in ("a", "b", "c")
        ]
        records = [
            _record(documents[0], True),
            _record(documents[1], False, FilterVerdict(VerdictKind.IMPLICIT_EOT)),
            _record(documents[2], True),
        ]
        write_jsonl(self.records_path, (r.to_json() for r in records))
        remove, _ = self.assemble(DatasetVariant.REMOVE)
        restore, _ = self.assemble(DatasetVariant.RESTORE)
        self.assertEqual((remove.written, remove.dropped), (2, 1))
        self.assertEqual((restore.written, restore.substituted), (3, 1))
        self.assertEqual(str(restore), "written=3 substituted=1 dropped=0")

    def test_stops_at_invalid_records(self):
        objects = [r.to_json() for r in self.records[:3]]
        objects[1]["verdict"] = "maybe"
        write_jsonl(self.records_path, objects)
        with self.assertRaises(SchemaError) as cm:
            assemble(self.records_path, DatasetVariant.REMOVE, self.path("out.jsonl"))
        self.assertEqual(cm.exception.line_number, 2)


class StripCorpusTest(testslide.TestCase):
    def setUp(self):
        super().setUp()
        tmpdir = tempfile.TemporaryDirectory()
        self.addCleanup(tmpdir.cleanup)
        self.in_path = os.path.join(tmpdir.name, "corpus.jsonl")
        self.out_path = os.path.join(tmpdir.name, "stripped.jsonl")

    def test_strips_supported_documents(self):
        write_jsonl(
            self.in_path,
            [
                {"id": "a", "language": "python", "content": "# c\nx = 1  # t\n"},
                {"id": "b", "language": "go", "content": "// c\nx := 1\n"},
            ],
        )
        counts = strip_corpus(self.in_path, self.out_path)
        self.assertEqual(counts, AssemblyCounts(written=2))
        self.assertEqual(
            [obj["content"] for obj in read_jsonl(self.out_path)],
            ["x = 1\n", "x := 1\n"],
        )

    def test_drops_invalid_and_unsupported_documents(self):
        write_jsonl(
            self.in_path,
            [
                {"id": "a", "language": "python", "content": "x = 1\n"},
                {"id": "b"},
                {"id": "h", "language": "haskell", "content": "-- c\nmain = pure ()"},
            ],
        )
        with self.assertLogs("commentaug.executor.assemble", "WARNING") as logs:
            counts = strip_corpus(self.in_path, self.out_path)
        self.assertEqual(counts, AssemblyCounts(written=1, dropped=2))
        self.assertEqual(len(logs.output), 2)

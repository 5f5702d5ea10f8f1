# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

"""
Build training datasets out of an augmented records file.

    remove           commented bodies of pass records, everything else dropped
    restore          commented bodies of pass records, originals for the rest
    absent           every original with all of its comments stripped
    passthrough      every original, unchanged
    original-remove  originals of pass records, everything else dropped
"""

import json
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional, Tuple

from commentaug.core.lexer import strip_comments
from commentaug.core.syntax import syntax_for, UnsupportedLanguage
from commentaug.corpus.io import (
    CodeDocument,
    CorpusIOError,
    open_output,
    read_corpus,
    SchemaError,
)

from .lib import AugmentedRecord, read_records

logger = logging.getLogger(__name__)


class DatasetVariant(str, Enum):
    REMOVE = "remove"
    RESTORE = "restore"
    ABSENT = "absent"
    PASSTHROUGH = "passthrough"
    ORIGINAL_REMOVE = "original-remove"


@dataclass
class AssemblyCounts:
    written: int = 0
    substituted: int = 0
    dropped: int = 0

    def __str__(self) -> str:
        return "written={} substituted={} dropped={}".format(
            self.written, self.substituted, self.dropped
        )


def strip_document(document: CodeDocument) -> CodeDocument:
    return document.replace_content(
        strip_comments(document.content, syntax_for(document.language))
    )


def variant_document(
    record: AugmentedRecord, variant: DatasetVariant
) -> Tuple[Optional[CodeDocument], bool]:
    """
    The document `variant` writes for `record`, or None when the record is
    dropped, and whether the original was substituted for a rejected output.
    """
    variant = DatasetVariant(variant)
    if variant is DatasetVariant.ABSENT:
        return strip_document(record.document), False
    if variant is DatasetVariant.PASSTHROUGH:
        return record.document, False
    if record.passed:
        if variant is DatasetVariant.ORIGINAL_REMOVE:
            return record.document, False
        assert record.generated is not None
        return record.document.replace_content(record.generated), False
    if variant is DatasetVariant.RESTORE:
        return record.document, True
    return None, False


def _write(
    pairs: Iterable[Tuple[Optional[CodeDocument], bool]], out_path: str
) -> AssemblyCounts:
    counts = AssemblyCounts()
    with open_output(out_path) as stream:
        try:
            for document, substituted in pairs:
                if document is None:
                    counts.dropped += 1
                    continue
                stream.write(json.dumps(document.to_json(), ensure_ascii=False))
                stream.write("\n")
                counts.written += 1
                counts.substituted += substituted
        except OSError as error:
            raise CorpusIOError(out_path, error)
    return counts


def _records(path: str) -> Iterator[AugmentedRecord]:
    for item in read_records(path):
        if isinstance(item, SchemaError):
            raise item
        yield item


def assemble_records(
    records: Iterable[AugmentedRecord], variant: DatasetVariant, out_path: str
) -> AssemblyCounts:
    return _write((variant_document(record, variant) for record in records), out_path)


def assemble(
    records_path: str, variant: DatasetVariant, out_path: str
) -> AssemblyCounts:
    """
    Write the `variant` dataset built from the records at `records_path`.
    Raises SchemaError on the first invalid record.
    """
    counts = assemble_records(_records(records_path), variant, out_path)
    logger.info("%s: %s variant: %s", out_path, DatasetVariant(variant).value, counts)
    return counts


def strip_corpus(in_path: str, out_path: str) -> AssemblyCounts:
    """
    The absent variant applied directly to a corpus. Invalid records and
    documents in unsupported languages are logged and dropped.
    """

    def documents() -> Iterator[Tuple[Optional[CodeDocument], bool]]:
        for item in read_corpus(in_path):
            if isinstance(item, SchemaError):
                logger.warning("%s: skipping record: %s", in_path, item)
                yield None, False
                continue
            try:
                yield strip_document(item), False
            except UnsupportedLanguage as error:
                logger.warning("%s: skipping %s: %s", in_path, item.id, error)
                yield None, False

    return _write(documents(), out_path)

# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

from typing import Any, Mapping, Type

import typeguard

##
## Type validation
##

# Typeguard by default only type checks the first item of a list
typeguard.config.collection_check_strategy = (
    typeguard.CollectionCheckStrategy.ALL_ITEMS
)


class TypeCheckError(ValueError):
    """
    Raised when a value read from a corpus, records or configuration file
    does not have the expected type.
    """

    def __init__(self, name: str, message: str) -> None:
        super().__init__(f"{name}: {message}")
        self.name = name


def validate_type(value: Any, expected_type: Type, name: str) -> None:
    try:
        typeguard.check_type(value, expected_type)
    except typeguard.TypeCheckError as type_error:
        raise TypeCheckError(name, str(type_error))


def validate_fields(
    obj: Mapping[str, Any],
    required: Mapping[str, Type],
    optional: Mapping[str, Type],
) -> None:
    """
    Check that `obj` carries every `required` key and that all known keys
    hold values of their declared type. Unknown keys are allowed.
    """
    for name in required:
        if name not in obj:
            raise TypeCheckError(name, "missing required field")
    for fields in (required, optional):
        for name, expected_type in fields.items():
            if name in obj:
                validate_type(obj[name], expected_type, name)


class ConfigError(ValueError):
    """
    Raised for invalid or inconsistent run, backend or decoder settings.
    """

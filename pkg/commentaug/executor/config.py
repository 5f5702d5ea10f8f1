# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

"""
Declarative run files. A run file is a YAML mapping whose keys mirror the
command line flags:

    in: corpus.jsonl
    out: records.jsonl
    workers: 8
    backend:
      kind: http
      endpoint: http://localhost:8000
      model: deepseek-coder-6.7b-instruct
      api_key_env: COMMENTAUG_API_KEY
    decoder:
      probe_len: 8
      segment_budget: 512
    bench:
      instance_nums: [1, 4, 16]
      batch_sizes: [1, 8, 64]
      latency: {step_ms: 25.0, compute_ms: 0.02, overhead_ms: 1.0}
"""

import os
from dataclasses import fields
from typing import Any, Dict, List, Mapping, Optional, Type, Union

import yaml

from commentaug.backend.lib import BackendConfig, BackendKind
from commentaug.core.lib import ConfigError, TypeCheckError, validate_type
from commentaug.decoder.session import DecoderConfig

from .bench import BenchGrid, LatencyModel

Number = Union[int, float]

RUN_FILE_FIELDS: Dict[str, Type] = {
    "in": str,
    "out": str,
    "workers": int,
    "format": str,
    "variant": str,
    "resume": bool,
    "unconstrained": bool,
    "timing": bool,
    "backend": Dict[str, Any],
    "decoder": Dict[str, Any],
    "bench": Dict[str, Any],
}
BACKEND_FIELDS: Dict[str, Type] = {
    "kind": str,
    "endpoint": str,
    "model": str,
    "api_key_env": str,
    "timeout": Number,
    "max_retries": int,
    "backoff": Number,
    "script": str,
}
DECODER_FIELDS: Dict[str, Type] = {
    "probe_len": int,
    "probe_step": int,
    "segment_budget": int,
    "max_segments": int,
    "temperature": Number,
    "max_context": int,
    "headroom": Number,
    "max_new_tokens": int,
}
BENCH_FIELDS: Dict[str, Type] = {
    "instance_nums": List[int],
    "batch_sizes": List[int],
    "latency": Dict[str, Any],
}
LATENCY_FIELDS: Dict[str, Type] = {
    "step_ms": Number,
    "compute_ms": Number,
    "overhead_ms": Number,
}


def _check(section: Mapping[str, Any], known: Mapping[str, Type], prefix: str) -> None:
    for key, value in section.items():
        name = f"{prefix}{key}"
        if key not in known:
            raise ConfigError(f"{name}: unknown key")
        try:
            validate_type(value, known[key], name)
        except TypeCheckError as error:
            raise ConfigError(str(error))


def validate_run_file(obj: Any, base_dir: str = "") -> Dict[str, Any]:
    if obj is None:
        return {}
    if not isinstance(obj, dict):
        raise ConfigError("a run file must be a mapping")
    _check(obj, RUN_FILE_FIELDS, "")
    _check(obj.get("backend", {}), BACKEND_FIELDS, "backend.")
    _check(obj.get("decoder", {}), DECODER_FIELDS, "decoder.")
    _check(obj.get("bench", {}), BENCH_FIELDS, "bench.")
    _check(obj.get("bench", {}).get("latency", {}), LATENCY_FIELDS, "bench.latency.")
    script = obj.get("backend", {}).get("script")
    if script and base_dir and not os.path.isabs(script):
        obj["backend"]["script"] = os.path.join(base_dir, script)
    return obj


def load_run_file(path: str) -> Dict[str, Any]:
    """
    Read and validate a run file. Relative paths to mock scripts are taken
    relative to the run file.
    """
    try:
        with open(path, encoding="utf-8") as stream:
            obj = yaml.safe_load(stream)
    except OSError as error:
        raise ConfigError(f"{path}: {error.strerror or error}")
    except yaml.YAMLError as error:
        raise ConfigError(f"{path}: invalid YAML: {error}")
    try:
        return validate_run_file(obj, os.path.dirname(path))
    except ConfigError as error:
        raise ConfigError(f"{path}: {error}")


def _build(cls: Type, section: Mapping[str, Any], name: str) -> Any:
    known = {f.name for f in fields(cls)}
    try:
        return cls(**{k: v for k, v in section.items() if k in known}).validate()
    except (TypeError, ValueError) as error:
        if isinstance(error, ConfigError):
            raise
        raise ConfigError(f"{name}: {error}")


def backend_config(
    section: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None
) -> BackendConfig:
    merged = dict(section)
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if "kind" in merged:
        try:
            merged["kind"] = BackendKind(merged["kind"])
        except ValueError:
            raise ConfigError(f"backend.kind: unknown backend {merged['kind']!r}")
    return _build(BackendConfig, merged, "backend")


def decoder_config(section: Mapping[str, Any]) -> DecoderConfig:
    return _build(DecoderConfig, section, "decoder")


def bench_grid(section: Mapping[str, Any]) -> BenchGrid:
    values = {
        key: tuple(section[key])
        for key in ("instance_nums", "batch_sizes")
        if key in section
    }
    return _build(BenchGrid, values, "bench")


def latency_model(section: Mapping[str, Any]) -> LatencyModel:
    return _build(LatencyModel, section.get("latency", {}), "bench.latency")

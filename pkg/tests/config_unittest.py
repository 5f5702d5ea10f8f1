# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import os
import tempfile

import testslide

from commentaug.backend.lib import BackendKind
from commentaug.core.lib import ConfigError
from commentaug.executor.bench import DEFAULT_BATCH_SIZES
from commentaug.executor.config import (
    backend_config,
    bench_grid,
    decoder_config,
    latency_model,
    load_run_file,
    validate_run_file,
)

RUN_FILE = """\
in: corpus.jsonl
out: records.jsonl
workers: 8
backend:
  kind: mock
  script: scripts/comments.json
decoder:
  probe_len: 4
  headroom: 0.5
bench:
  instance_nums: [1, 4]
  latency: {step_ms: 10, overhead_ms: 0.5}
"""


class LoadRunFileTest(testslide.TestCase):
    def setUp(self):
        super().setUp()
        tmpdir = tempfile.TemporaryDirectory()
        self.addCleanup(tmpdir.cleanup)
        self.tmpdir = tmpdir.name

    def write(self, text):
        path = os.path.join(self.tmpdir, "run.yaml")
        with open(path, "w", encoding="utf-8") as stream:
            stream.write(text)
        return path

    def test_reads_every_section(self):
        run = load_run_file(self.write(RUN_FILE))
        self.assertEqual(
            (run["in"], run["out"], run["workers"]),
            ("corpus.jsonl", "records.jsonl", 8),
        )
        self.assertEqual(
            run["backend"]["script"],
            os.path.join(self.tmpdir, "scripts/comments.json"),
        )
        self.assertEqual(decoder_config(run["decoder"]).probe_len, 4)
        self.assertEqual(bench_grid(run["bench"]).instance_nums, (1, 4))
        self.assertEqual(bench_grid(run["bench"]).batch_sizes, DEFAULT_BATCH_SIZES)
        latency = latency_model(run["bench"])
        self.assertEqual((latency.step_ms, latency.overhead_ms), (10, 0.5))

    def test_keeps_absolute_script_paths(self):
        run = load_run_file(self.write("backend: {script: /srv/script.json}\n"))
        self.assertEqual(run["backend"]["script"], "/srv/script.json")

    def test_empty_file(self):
        self.assertEqual(load_run_file(self.write("")), {})

    def test_errors_name_the_file(self):
        for text, message in (
            ("- a\n- b\n", "must be a mapping"),
            ("inn: corpus.jsonl\n", "inn: unknown key"),
            ("workers: many\n", "workers"),
            ("decoder: {probe_len: 1.5}\n", "decoder.probe_len"),
            ("bench: {latency: {step_ms: fast}}\n", "bench.latency.step_ms"),
            ("backend: [mock]\n", "backend"),
            ("in: [unclosed\n", "invalid YAML"),
        ):
            with self.subTest(text=text):
                path = self.write(text)
                with self.assertRaises(ConfigError) as cm:
                    load_run_file(path)
                self.assertIn(path, str(cm.exception))
                self.assertIn(message, str(cm.exception))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_run_file(os.path.join(self.tmpdir, "missing.yaml"))


class SectionsTest(testslide.TestCase):
    def test_validate_run_file_accepts_none(self):
        self.assertEqual(validate_run_file(None), {})

    def test_backend_overrides_win_unless_unset(self):
        config = backend_config(
            {"kind": "http", "endpoint": "http://a", "model": "m"},
            {"endpoint": "http://b", "model": None},
        )
        self.assertIs(config.kind, BackendKind.HTTP)
        self.assertEqual((config.endpoint, config.model), ("http://b", "m"))

    def test_backend_errors(self):
        with self.assertRaisesRegex(ConfigError, "unknown backend"):
            backend_config({"kind": "grpc"})
        with self.assertRaises(ConfigError):
            backend_config({"kind": "http"})

    def test_defaults(self):
        self.assertIs(backend_config({}).kind, BackendKind.MOCK)
        self.assertEqual(decoder_config({}).probe_len, 8)
        self.assertEqual(latency_model({}).step_ms, 25.0)

    def test_invalid_values(self):
        with self.assertRaises(ConfigError):
            decoder_config({"probe_len": 0})
        with self.assertRaises(ConfigError):
            bench_grid({"batch_sizes": []})
        with self.assertRaises(ConfigError):
            latency_model({"latency": {"compute_ms": -1}})

# Copyright (c) Facebook, Inc. and its affiliates.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

# pyre-unsafe

import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from commentaug.backend import build_backend
from commentaug.backend.lib import BackendConfig, BackendKind
from commentaug.core.lib import ConfigError
from commentaug.core.matchers import InvalidPattern
from commentaug.core.syntax import UnsupportedLanguage
from commentaug.corpus.io import (
    CorpusIOError,
    open_output,
    read_corpus,
    read_documents,
    SchemaError,
    STDIO_PATH,
)
from commentaug.corpus.stats import corpus_stats, render_report, ReportFormat
from commentaug.decoder.session import DecoderConfig

from .assemble import assemble, DatasetVariant, strip_corpus
from .bench import bench_speedup, BenchGrid, LatencyModel, parse_sizes
from .config import (
    backend_config,
    bench_grid,
    decoder_config,
    latency_model,
    load_run_file,
)
from .lib import augment_corpus, augment_document, read_records
from .runner import (
    colors_enabled,
    DocumentFormatter,
    highlight,
    ProgressFormatter,
    QuietFormatter,
)

logger = logging.getLogger(__name__)

FATAL_ERRORS = (
    ConfigError,
    CorpusIOError,
    InvalidPattern,
    SchemaError,
    UnsupportedLanguage,
    OSError,
)

_log_handler: Optional[logging.Handler] = None


def _configure_logging(verbosity: int) -> None:
    global _log_handler
    root = logging.getLogger("commentaug")
    if _log_handler is not None:
        root.removeHandler(_log_handler)
    _log_handler = logging.StreamHandler(sys.stderr)
    _log_handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(_log_handler)
    root.setLevel(
        {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    )


@dataclass(frozen=True)
class _Config:
    command: str
    in_path: str
    out_path: str
    format: Optional[str] = None
    workers: int = 1
    variant: DatasetVariant = DatasetVariant.RESTORE
    resume: bool = False
    unconstrained: bool = False
    timing: bool = False
    force_color: bool = False
    records: bool = False
    document_id: Optional[str] = None
    backend: BackendConfig = field(default_factory=BackendConfig)
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    grid: BenchGrid = field(default_factory=BenchGrid)
    latency: LatencyModel = field(default_factory=LatencyModel)


class Cli:
    FORMAT_NAME_TO_FORMATTER_CLASS = {
        "p": ProgressFormatter,
        "progress": ProgressFormatter,
        "d": DocumentFormatter,
        "documentation": DocumentFormatter,
        "q": QuietFormatter,
        "quiet": QuietFormatter,
    }

    @staticmethod
    def _add_common(parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--config",
            type=str,
            help="YAML run file; command line flags override its values",
        )
        parser.add_argument(
            "--in",
            dest="in_path",
            type=str,
            help="Input JSON-lines file, '-' for stdin",
        )
        parser.add_argument(
            "-v",
            "--verbose",
            action="count",
            default=0,
            help="Log more: -v for progress, -vv for debugging",
        )
        parser.add_argument(
            "--force-color",
            action="store_true",
            help="Force color output even without a terminal",
        )

    @staticmethod
    def _add_out(parser: argparse.ArgumentParser, help: str) -> None:
        parser.add_argument("--out", dest="out_path", type=str, help=help)

    @staticmethod
    def _add_backend(parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--backend",
            choices=[kind.value for kind in BackendKind],
            help="Completion backend. Default: mock",
        )
        parser.add_argument("--script", type=str, help="Mock backend rules (JSON)")
        parser.add_argument("--endpoint", type=str, help="HTTP backend base URL")
        parser.add_argument("--model", type=str, help="HTTP backend model name")
        parser.add_argument(
            "--api-key-env",
            type=str,
            help="Environment variable holding the HTTP backend API key",
        )
        parser.add_argument(
            "--probe-len", type=int, help="Maximum tokens probed per line start"
        )
        parser.add_argument(
            "--segment-budget", type=int, help="Maximum tokens per comment segment"
        )
        parser.add_argument(
            "--max-context", type=int, help="Model context length in tokens"
        )

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="commentaug",
            description="Comment density analysis and comment augmentation for "
            "code pre-training corpora",
        )
        commands = parser.add_subparsers(dest="command", metavar="COMMAND")
        commands.required = True

        stats = commands.add_parser("stats", help="Comment density per language")
        self._add_common(stats)
        stats.add_argument(
            "-f",
            "--format",
            choices=[f.value for f in ReportFormat],
            help="Report format. Default: text",
        )
        self._add_out(stats, "Report file. Default: stdout")

        strip = commands.add_parser("strip", help="Remove every comment of a corpus")
        self._add_common(strip)
        self._add_out(strip, "Output corpus. Default: stdout")

        augment = commands.add_parser(
            "augment", help="Generate comments and filter the results"
        )
        self._add_common(augment)
        self._add_out(augment, "Augmented records file. Default: stdout")
        self._add_backend(augment)
        augment.add_argument(
            "-f",
            "--format",
            choices=self.FORMAT_NAME_TO_FORMATTER_CLASS.keys(),
            help="Configure output format. Default: progress",
        )
        augment.add_argument(
            "--workers", type=int, help="Documents processed concurrently"
        )
        augment.add_argument(
            "--resume",
            action="store_true",
            default=None,
            help="Skip documents already in --out and append to it",
        )
        augment.add_argument(
            "--unconstrained",
            action="store_true",
            default=None,
            help="Let the backend rewrite whole documents instead of copying code",
        )
        augment.add_argument(
            "--timing",
            action="store_true",
            default=None,
            help="Write per-record wall time (output is no longer reproducible)",
        )

        assemble_parser = commands.add_parser(
            "assemble", help="Build a dataset variant from augmented records"
        )
        self._add_common(assemble_parser)
        self._add_out(assemble_parser, "Output corpus. Default: stdout")
        assemble_parser.add_argument(
            "--variant",
            choices=[v.value for v in DatasetVariant],
            help="Dataset variant. Default: restore",
        )

        bench = commands.add_parser(
            "bench", help="Simulated speedup of constrained generation"
        )
        self._add_common(bench)
        self._add_out(bench, "CSV speedup matrix. Default: stdout")
        self._add_backend(bench)
        bench.add_argument(
            "--instance-nums", type=str, help="Comma separated instance counts"
        )
        bench.add_argument(
            "--batch-sizes", type=str, help="Comma separated batch sizes"
        )

        validate = commands.add_parser("validate", help="Check a file's schema")
        self._add_common(validate)
        validate.add_argument(
            "--records",
            action="store_true",
            help="Validate an augmented records file instead of a corpus",
        )

        preview = commands.add_parser(
            "preview", help="Augment one document and print the result"
        )
        self._add_common(preview)
        self._add_backend(preview)
        preview.add_argument(
            "--id",
            dest="document_id",
            type=str,
            help="Document to preview. Default: the first one",
        )
        return parser

    def __init__(self, args: List[str]) -> None:
        self.args = args
        self.parser = self._build_parser()

    @staticmethod
    def _pick(parsed_args: Any, flag: str, run_file: Dict[str, Any], key: str) -> Any:
        value = getattr(parsed_args, flag, None)
        return value if value is not None else run_file.get(key)

    def _get_config_from_parsed_args(self, parsed_args: Any) -> _Config:
        run_file = load_run_file(parsed_args.config) if parsed_args.config else {}

        def pick(flag: str, key: Optional[str] = None, default: Any = None) -> Any:
            value = self._pick(parsed_args, flag, run_file, key or flag)
            return default if value is None else value

        in_path = pick("in_path", "in")
        if not in_path:
            raise ConfigError("no input: pass --in or set 'in' in the run file")
        backend = backend_config(
            run_file.get("backend", {}),
            {
                "kind": getattr(parsed_args, "backend", None),
                "script": getattr(parsed_args, "script", None),
                "endpoint": getattr(parsed_args, "endpoint", None),
                "model": getattr(parsed_args, "model", None),
                "api_key_env": getattr(parsed_args, "api_key_env", None),
            },
        )
        decoder_section = dict(run_file.get("decoder", {}))
        for flag in ("probe_len", "segment_budget", "max_context"):
            if getattr(parsed_args, flag, None) is not None:
                decoder_section[flag] = getattr(parsed_args, flag)
        bench_section = dict(run_file.get("bench", {}))
        for flag in ("instance_nums", "batch_sizes"):
            if getattr(parsed_args, flag, None) is not None:
                bench_section[flag] = parse_sizes(getattr(parsed_args, flag))
        workers = pick("workers", default=1)
        if workers < 1:
            raise ConfigError(f"workers must be >= 1, got {workers}")
        try:
            variant = DatasetVariant(pick("variant", default="restore"))
        except ValueError as error:
            raise ConfigError(f"variant: {error}")
        return _Config(
            command=parsed_args.command,
            in_path=in_path,
            out_path=pick("out_path", "out", default=STDIO_PATH),
            format=pick("format"),
            workers=workers,
            variant=variant,
            resume=bool(pick("resume", default=False)),
            unconstrained=bool(pick("unconstrained", default=False)),
            timing=bool(pick("timing", default=False)),
            force_color=parsed_args.force_color,
            records=bool(getattr(parsed_args, "records", False)),
            document_id=getattr(parsed_args, "document_id", None),
            backend=backend,
            decoder=decoder_config(decoder_section),
            grid=bench_grid(bench_section),
            latency=latency_model(bench_section),
        )

    ##
    ## Commands
    ##

    def _stats(self, config: _Config) -> int:
        try:
            format = ReportFormat(config.format or ReportFormat.TEXT.value)
        except ValueError:
            raise ConfigError(f"format: unknown report format {config.format!r}")
        stats = corpus_stats(read_documents(config.in_path))
        with open_output(config.out_path) as stream:
            stream.write(render_report(stats, format))
        return 0

    def _strip(self, config: _Config) -> int:
        counts = strip_corpus(config.in_path, config.out_path)
        logger.info("strip: %s", counts)
        return 0

    def _augment(self, config: _Config) -> int:
        format = config.format or "progress"
        if format not in self.FORMAT_NAME_TO_FORMATTER_CLASS:
            raise ConfigError(f"format: unknown output format {format!r}")
        stream = sys.stderr if config.out_path == STDIO_PATH else sys.stdout
        formatter = self.FORMAT_NAME_TO_FORMATTER_CLASS[format](
            stream=stream, force_color=config.force_color
        )
        with build_backend(config.backend) as backend:
            summary = augment_corpus(
                config.in_path,
                config.out_path,
                backend,
                config=config.decoder,
                workers=config.workers,
                resume=config.resume,
                unconstrained=config.unconstrained,
                timing=config.timing,
                on_record=formatter.new_record,
            )
        formatter.finish(summary)
        return 0

    def _assemble(self, config: _Config) -> int:
        counts = assemble(config.in_path, config.variant, config.out_path)
        print(counts, file=sys.stderr)
        return 0

    def _bench(self, config: _Config) -> int:
        with build_backend(config.backend) as backend:
            result = bench_speedup(
                read_documents(config.in_path),
                backend,
                grid=config.grid,
                latency=config.latency,
                config=config.decoder,
            )
        with open_output(config.out_path) as stream:
            stream.write(result.to_csv())
        logger.info(
            "bench: %d documents, predicted speedup %.2f",
            result.documents,
            result.predicted_speedup,
        )
        return 0

    def _validate(self, config: _Config) -> int:
        reader = read_records if config.records else read_corpus
        valid = 0
        errors = 0
        for item in reader(config.in_path):
            if isinstance(item, SchemaError):
                errors += 1
                print(f"{config.in_path}: {item}")
            else:
                valid += 1
        print(f"{valid} valid, {errors} invalid")
        return 1 if errors else 0

    def _preview(self, config: _Config) -> int:
        document = next(
            (
                d
                for d in read_documents(config.in_path)
                if config.document_id is None or d.id == config.document_id
            ),
            None,
        )
        if document is None:
            raise ConfigError(f"{config.in_path}: no document {config.document_id!r}")
        with build_backend(config.backend) as backend:
            record = augment_document(document, backend, config.decoder)
        colored = colors_enabled(sys.stdout, config.force_color)
        verdict = str(record.verdict) if record.verdict else record.error
        print(f"{document.id} [{document.language}]: {verdict}")
        text = record.generated if record.generated is not None else document.content
        print(highlight(text, document.language, colored), end="")
        return 0

    def run(self) -> int:
        try:
            parsed_args = self.parser.parse_args(self.args)
        except SystemExit as e:
            return e.code  # type: ignore
        _configure_logging(parsed_args.verbose)
        try:
            config = self._get_config_from_parsed_args(parsed_args)
            return getattr(self, f"_{config.command}")(config)
        except FATAL_ERRORS as error:
            message = f"{type(error).__name__}: {error}"
            if colors_enabled(sys.stderr, parsed_args.force_color):
                message = f"\033[0m\033[31m{message}\033[0m"
            print(message, file=sys.stderr)
            return 1


def main() -> None:
    try:
        sys.exit(Cli(sys.argv[1:]).run())
    except KeyboardInterrupt:
        print("SIGINT received, exiting.", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()

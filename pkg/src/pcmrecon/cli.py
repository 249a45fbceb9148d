"""Command line entry point: ``pcmrecon {project,denoise,reconstruct,bench}``.

Exit status is 0 on success, 1 when any seed failed and 2 on a bad
configuration.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError
from .solvers import format_table
from .experiment import (
    BENCHES,
    DENOISE_MODELS,
    RECON_MODELS,
    ExperimentConfig,
    bench_spec,
    load_config,
    parse_config,
    run_bench,
    run_experiment,
)

EXIT_OK, EXIT_FAILED_SEED, EXIT_CONFIG = 0, 1, 2


def _summary(result) -> str:
    rows = []
    cfg = result.config
    for model in cfg.models:
        for sigma in cfg.sigmas:
            row = {"model": model, "sigma": sigma}
            for metric in ("ssim", "psnr", "snr", "rela_err"):
                row[metric] = result.mean(model, sigma, metric)
            rows.append(row)
    return format_table(rows)


def _check_models(cfg: ExperimentConfig, allowed, command: str) -> None:
    bad = [m for m in cfg.models if m not in allowed]
    if bad:
        raise ConfigError(f"{command} does not run model(s) {', '.join(bad)}; use one of {', '.join(allowed)}")


def _run(cfg: ExperimentConfig, out: Path) -> int:
    result = run_experiment(cfg, out)
    print(_summary(result))
    for o in result.failed:
        print(f"FAILED {o.label}: {o.error}", file=sys.stderr)
    return EXIT_FAILED_SEED if result.failed else EXIT_OK


def cmd_project(args) -> int:
    cfg = load_config(args.config).updated(models=("projection",))
    return _run(cfg, args.out)


def cmd_denoise(args) -> int:
    cfg = load_config(args.config)
    _check_models(cfg, DENOISE_MODELS, "denoise")
    return _run(cfg, args.out)


def cmd_reconstruct(args) -> int:
    cfg = load_config(args.config)
    _check_models(cfg, RECON_MODELS, "reconstruct")
    return _run(cfg, args.out)


def cmd_bench(args) -> int:
    spec = bench_spec(args.name)
    if args.config is not None:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        spec = replace(spec, config=parse_config(text, base=spec.config))
    seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else None
    result = run_bench(spec, args.out, seeds=seeds)
    print(f"{spec.name}: {spec.description}")
    print(format_table(result.summary_rows()))
    failed = result.result.failed
    for o in failed:
        print(f"FAILED {o.label}: {o.error}", file=sys.stderr)
    return EXIT_FAILED_SEED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcmrecon", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver warnings")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, text in (
        ("project", cmd_project, "least-squares projection onto the Haar subspace only"),
        ("denoise", cmd_denoise, "TV, TFV or TV-TFV denoising of a noisy image"),
        ("reconstruct", cmd_reconstruct, "reconstruction from noisy non-uniform Fourier data"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="key = value config file")
        p.add_argument("--out", required=True, type=Path, help="output directory")
        p.set_defaults(func=fn)
    p = sub.add_parser("bench", help="reproduce a named table with held-out tuning")
    p.add_argument("name", choices=sorted(BENCHES))
    p.add_argument("--config", help="optional overrides of the bench's base config")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.add_argument("--seeds", help="comma-separated evaluation seeds")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

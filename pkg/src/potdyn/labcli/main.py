"""``potdyn`` command line."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .. import __version__
from ..errors import PotdynError
from .config import ConfigError, ExperimentConfig
from .experiments import EXPERIMENTS, run_experiment

# Used when no --config is given.
DEFAULTS = {
    "thm-brolin": {"family": {"name": "power_plus_c", "params": {"c": 0.5}},
                   "n_list": [4, 8, 16], "moments": 4},
    "thm-klimek": {"family": {"name": "power_plus_c", "params": {"c": 0.5}},
                   "n_list": [4, 8, 16, 32]},
    "hausdorff-dichotomy": {"family": {"name": "power_plus_c", "params": {"c": 0.5}},
                            "n_list": [4, 8, 16, 32]},
    "lemma31": {"family": {"name": "chebyshev", "params": {}}, "n_list": [8, 16, 32, 64]},
    "limitsets": {"family": {"name": "power_plus_c", "params": {"c": 0.5}},
                  "n_list": [8, 16, 32, 64]},
    "minimality": {"family": {"name": "chebyshev", "params": {}}, "n_list": [4, 8, 16, 32]},
    "render": {"polynomial": [[0, 0], [0, 0], [1, 0]], "render": ["julia", "green"]},
}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS,
                        help="JSON experiment config")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS,
                        help="output directory")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="master seed (unsigned 64-bit)")
    ap = argparse.ArgumentParser(prog="potdyn", parents=[common],
                                 description="Potential theory and polynomial dynamics experiments.")
    ap.add_argument("--version", action="version", version=f"potdyn {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in EXPERIMENTS.items():
        doc = (fn.__doc__ or "").strip().splitlines()
        sub.add_parser(name, parents=[common], help=doc[0] if doc else name)
    return ap


def load_config(name: str, path: Path | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig.from_dict({"experiment": name, **DEFAULTS[name]})
    return ExperimentConfig.from_json(Path(path).read_text(encoding="utf-8"))


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.command, getattr(args, "config", None))
        out = getattr(args, "out", None)
        cfg = cfg.with_overrides(seed=getattr(args, "seed", None),
                                 out=str(out) if out is not None else None)
        if cfg.out is None:
            cfg = cfg.with_overrides(out=f"results/{args.command}")
        result = run_experiment(args.command, cfg, cfg.out)
    except (ConfigError, PotdynError, ValueError, OSError) as exc:
        print(f"potdyn: error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps({"experiment": result.name, "out": cfg.out,
                      "rows": len(result.records)}, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())

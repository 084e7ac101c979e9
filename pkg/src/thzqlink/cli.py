"""``thzq`` command line: one subcommand per sweep, CSV out, JSON sidecar for replay.

Exit codes: 0 success, 1 a solver found no root for some row, 2 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .sweeps import COLUMNS, COMMANDS, SweepError, build_spec, compute_rows, failed, render_csv

log = logging.getLogger("thzqlink")

PHYSICS_FLAGS = (
    ("freq", "carrier frequency in Hz"),
    ("temp", "temperature in K"),
    ("squeeze-db", "initial two-mode squeezing in dB"),
    ("transmissivity", "channel transmissivity"),
    ("eta", "detector efficiency"),
    ("w0", "beam-waist radius in m"),
    ("ra", "receiver aperture radius in m"),
    ("dist", "link distance in m"),
    ("kappa", "target reflectivity"),
    ("ns", "signal photons per mode"),
    ("nb", "background photons per mode (radar; replaces --freq/--temp)"),
    ("target-rate", "target key rate in bits/use"),
)
BOOLEAN_KEYS = ("log", "linear")
VALUE_KEYS = ("out", "points", "workers") + tuple(f for f, _ in PHYSICS_FLAGS)


def _dest(flag: str) -> str:
    return flag.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thzq",
        description="Terahertz continuous-variable quantum link sweeps.",
        epilog="Physics flags take a comma list (1e12,5e12) or a range min:max sampled with --points.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, cmd in COMMANDS.items():
        s = sub.add_parser(name, help=cmd.help, description=cmd.help)
        s.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
        s.add_argument("--config", help="key = value file; keys are long flag names")
        s.add_argument("--points", type=int, default=200, help="samples per range axis")
        s.add_argument("--workers", type=int, default=1, help="parallel worker processes")
        spacing = s.add_mutually_exclusive_group()
        spacing.add_argument("--log", dest="log", action="store_const", const=True, default=None)
        spacing.add_argument("--linear", dest="log", action="store_const", const=False)
        used = set(cmd.axes) | set(cmd.scalars) | ({"nb"} if name == "radar" else set())
        for flag, text in PHYSICS_FLAGS:
            if flag in used:
                default = cmd.defaults.get(flag)
                suffix = f" (default {default})" if default is not None else ""
                s.add_argument(f"--{flag}", dest=_dest(flag), help=text + suffix)

    replay = sub.add_parser("replay", help="re-run the sweep recorded in a sidecar file")
    replay.add_argument("sidecar", help="path to a .meta.json sidecar")
    replay.add_argument("--out", help="write to this path instead of the recorded one")
    return parser


def read_config(path: str) -> list[str]:
    """Turn a ``key = value`` file into argv tokens placed ahead of the real flags."""
    tokens = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SweepError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SweepError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in BOOLEAN_KEYS:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(f"--{key}")
            elif value.lower() not in ("0", "false", "no", "off"):
                raise SweepError(f"{path}:{lineno}: {key} expects true/false")
        elif key in VALUE_KEYS:
            tokens += [f"--{key}", value]
        else:
            raise SweepError(f"{path}:{lineno}: unknown key {key!r}")
    return tokens


def _config_path(argv: Sequence[str]) -> Optional[str]:
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def canonical_argv(args: argparse.Namespace, spec) -> list[str]:
    """Fully resolved argv that reproduces the sweep without any config file."""
    argv = [args.command, "--out", args.out, "--points", str(spec.points)]
    if spec.log is not None:
        argv.append("--log" if spec.log else "--linear")
    for ax in spec.axes:
        text = f"{ax.lo!r}:{ax.hi!r}" if ax.is_range else ",".join(repr(v) for v in ax.values)
        argv += [f"--{ax.name}", text]
    for name, value in spec.fixed.items():
        argv += [f"--{name}", repr(value)]
    return argv


def write_outputs(args: argparse.Namespace, spec, rows: list) -> None:
    text = render_csv(spec.command, rows)
    if args.out == "-":
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    sidecar = {
        "command": spec.command,
        "argv": canonical_argv(args, spec),
        "columns": list(COLUMNS[spec.command]),
        "rows": len(rows),
        "version": __version__,
    }
    Path(str(out) + ".meta.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")


def run(argv: Sequence[str]) -> int:
    parser = build_parser()
    argv = list(argv)
    if argv and argv[0] == "replay":
        args = parser.parse_args(argv)
        meta = json.loads(Path(args.sidecar).read_text())
        replay_argv = list(meta["argv"])
        if args.out:
            replay_argv[replay_argv.index("--out") + 1] = args.out
        return run(replay_argv)

    # Precedence: defaults < config file < command line.
    cfg = _config_path(argv)
    if cfg is not None and argv:
        try:
            argv = argv[:1] + read_config(cfg) + argv[1:]
        except SweepError as exc:
            parser.error(str(exc))
    args = parser.parse_args(argv)
    given = {
        flag: getattr(args, _dest(flag))
        for flag, _ in PHYSICS_FLAGS
        if hasattr(args, _dest(flag))
    }
    try:
        spec = build_spec(args.command, given, points=args.points, log=args.log)
        spec.grid()
    except SweepError as exc:
        parser.error(str(exc))

    rows = compute_rows(spec, workers=args.workers)
    write_outputs(args, spec, rows)
    if failed(rows):
        log.error("%s: solver found no root for at least one row (status=no_root)", args.command)
        return 1
    return 0


def main(argv: Optional[Sequence[str]] = None) -> None:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()

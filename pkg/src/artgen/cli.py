"""Command-line entry point.

Subcommands: generate (build verified bundles), validate (structural checks
on existing bundles), stats (corpus metrics over URDFs), sweep (re-run the
motion-sweep collision check on bundles).

Config precedence per key: CLI flag > config file > built-in default. The
config file is plain `key: value` text (keys: category, count, seed, out,
grammar_dir, samples_per_joint, threads, plus `override.<name>: lo..hi`
style-range lines).

Exit codes: 0 success; 1 usage or configuration error; 2 plausibility or
sweep failure; 3 parse/IO failure on inputs; 4 no inputs found.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__
from .errors import ArtgenError, ConfigError, ParseError
from .pipeline import GenConfig, generate_corpus, load_category
from .plausibility import motion_sweep_check
from .tree import validate_tree
from .metrics.stats import corpus_stats, write_metrics
from .export.urdf import parse_urdf_report
from .export.bundle import MANIFEST_NAME, check_bundle
from .objio import read_obj

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PLAUSIBILITY = 2
EXIT_PARSE = 3
EXIT_EMPTY = 4


def _read_config_file(path: Path) -> dict:
    out: dict = {}
    overrides: dict[str, tuple[float, float]] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key: value'")
        key, value = key.strip(), value.strip()
        if key.startswith("override."):
            lo, _, hi = value.partition("..")
            overrides[key[len("override."):]] = (float(lo), float(hi))
        elif key in ("category", "out", "grammar_dir"):
            out[key] = value
        elif key in ("count", "seed", "samples_per_joint", "threads"):
            out[key] = int(value)
        else:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
    if overrides:
        out["overrides"] = overrides
    return out


def _merged(args, key: str, file_cfg: dict, default):
    cli_value = getattr(args, key, None)
    if cli_value is not None:
        return cli_value
    if key in file_cfg:
        return file_cfg[key]
    return default


def _find_urdfs(directory: Path) -> list[Path]:
    return sorted(directory.rglob("*.urdf"))


def _load_bundle_tree(urdf_path: Path, with_meshes: bool):
    tree, warnings = parse_urdf_report(urdf_path)
    if with_meshes:
        for i, node in enumerate(tree.nodes):
            if node.mesh_ref:
                mesh_file = urdf_path.parent / node.mesh_ref
                tree.meshes[i] = read_obj(mesh_file)
    return tree, warnings


def cmd_generate(args) -> int:
    file_cfg = _read_config_file(Path(args.config)) if args.config else {}
    category = _merged(args, "category", file_cfg, None)
    if not category:
        print("error: --category is required", file=sys.stderr)
        return EXIT_USAGE
    threads = 1 if args.single_thread_timing else int(_merged(args, "threads", file_cfg, 1))
    grammar_dir = _merged(args, "grammar_dir", file_cfg, None)
    config = GenConfig(
        master_seed=int(_merged(args, "seed", file_cfg, 0)),
        category=str(category),
        object_count=int(_merged(args, "count", file_cfg, 1)),
        output_dir=Path(_merged(args, "out", file_cfg, "out")),
        style_overrides=file_cfg.get("overrides", {}),
        data_dir=Path(grammar_dir) if grammar_dir else None,
        samples_per_joint=int(_merged(args, "samples_per_joint", file_cfg, 16)),
    )
    start = time.perf_counter()
    results = generate_corpus(config, threads=threads)
    elapsed = time.perf_counter() - start
    failures = 0
    for r in results:
        status = "pass" if r.sweep_ok else f"FAIL({r.sweep_violations})"
        print(f"object {r.index:04d} seed={r.seed} nodes={r.nodes} "
              f"joints={r.joints} moving={r.moving_joints} repair={r.repair} "
              f"sweep={status}")
        if not r.sweep_ok:
            failures += 1
    per_object = elapsed / max(len(results), 1)
    mode = "single-threaded" if threads <= 1 else f"threads={threads}"
    print(f"generated {len(results)} object(s) in {elapsed:.2f} s "
          f"({per_object:.3f} s/object, {mode})")
    if failures:
        print(f"error: {failures} object(s) fail the motion sweep", file=sys.stderr)
        return EXIT_PLAUSIBILITY
    return EXIT_OK


def cmd_validate(args) -> int:
    directory = Path(args.dir)
    urdfs = _find_urdfs(directory)
    if not urdfs:
        print(f"no URDF files under {directory}", file=sys.stderr)
        return EXIT_EMPTY
    bad = 0
    for path in urdfs:
        try:
            tree, warnings = _load_bundle_tree(path, with_meshes=False)
        except (ArtgenError, OSError) as e:
            print(f"{path}: INVALID: {e}")
            bad += 1
            continue
        report = validate_tree(tree)
        problems = list(warnings)
        problems.extend(f"{v.kind}: {v.detail}" for v in report.entries)
        if (path.parent / MANIFEST_NAME).exists():
            problems.extend(check_bundle(path.parent))
        if problems:
            print(f"{path}: INVALID")
            for p in problems:
                print(f"  {p}")
            bad += 1
        else:
            print(f"{path}: ok ({len(tree)} links, {tree.joint_count()} joints)")
    if bad:
        print(f"{bad}/{len(urdfs)} invalid", file=sys.stderr)
        return EXIT_PARSE
    return EXIT_OK


def cmd_stats(args) -> int:
    directory = Path(args.dir)
    urdfs = _find_urdfs(directory)
    if not urdfs:
        print(f"no URDF files under {directory}", file=sys.stderr)
        return EXIT_EMPTY
    trees = []
    for path in urdfs:
        try:
            tree, _ = _load_bundle_tree(path, with_meshes=False)
            trees.append(tree)
        except (ArtgenError, OSError) as e:
            print(f"warning: skipping {path}: {e}", file=sys.stderr)
    if not trees:
        print("no parseable URDF files", file=sys.stderr)
        return EXIT_PARSE
    metrics = corpus_stats(trees)
    for line in metrics.to_lines():
        print(line)
    if args.out:
        out = Path(args.out)
        write_metrics(metrics, out, out.with_suffix(".json"))
    return EXIT_OK


def cmd_sweep(args) -> int:
    directory = Path(args.dir)
    urdfs = _find_urdfs(directory)
    if not urdfs:
        print(f"no URDF files under {directory}", file=sys.stderr)
        return EXIT_EMPTY
    failures = 0
    errors = 0
    for path in urdfs:
        try:
            tree, _ = _load_bundle_tree(path, with_meshes=True)
        except (ArtgenError, OSError) as e:
            print(f"{path}: ERROR: {e}")
            errors += 1
            continue
        report = motion_sweep_check(tree, samples_per_joint=args.samples_per_joint)
        if report.ok:
            print(f"{path}: pass")
        else:
            print(f"{path}: FAIL ({len(report.violations)} violations)")
            for line in report.to_lines()[:10]:
                print(f"  {line}")
            failures += 1
    if errors:
        return EXIT_PARSE
    if failures:
        print(f"{failures}/{len(urdfs)} objects fail the sweep", file=sys.stderr)
        return EXIT_PLAUSIBILITY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="artgen",
        description="Procedural articulated-object generator (URDF + OBJ bundles)")
    parser.add_argument("--version", action="version", version=f"artgen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate verified bundles")
    gen.add_argument("--category")
    gen.add_argument("--count", type=int)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out")
    gen.add_argument("--grammar-dir", dest="grammar_dir",
                     help="category data directory (default: packaged data)")
    gen.add_argument("--samples-per-joint", dest="samples_per_joint", type=int)
    gen.add_argument("--threads", type=int)
    gen.add_argument("--single-thread-timing", action="store_true",
                     help="force one thread and report seconds per object")
    gen.add_argument("--config", help="key: value config file")
    gen.set_defaults(func=cmd_generate)

    val = sub.add_parser("validate", help="validate existing bundles")
    val.add_argument("dir")
    val.set_defaults(func=cmd_validate)

    st = sub.add_parser("stats", help="corpus metrics over a URDF directory")
    st.add_argument("dir")
    st.add_argument("--out", help="also write metrics to this file (+ .json)")
    st.set_defaults(func=cmd_stats)

    sw = sub.add_parser("sweep", help="motion-sweep collision check on bundles")
    sw.add_argument("dir")
    sw.add_argument("--samples-per-joint", dest="samples_per_joint",
                    type=int, default=16)
    sw.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ArtgenError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

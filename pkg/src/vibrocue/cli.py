"""Command line entry point (``vibrocue``)."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from collections import defaultdict
from pathlib import Path

from . import stats
from .decoder import FILE_TOLERANCE, decode
from .encoder import Timeline, TimingConstants, encode
from .experiment import (
    generate_trials,
    read_responses_csv,
    read_trials_csv,
    score,
    summary_csv,
    trials_csv,
)
from .glove import ELEVATION_THRESHOLD_DEG, Cue, Direction, Gradient, all_cues, layout_table, quantize_vector
from .intensity import IntensityScale, Scheme, build_scale
from .stream import FrameServer, RenderConfig, render_text

FORMATS = """\
formats:
  timeline JSON  {"scheme", "direction", "gradient", "total_ms",
                  "events": [{"actuator", "start_ms", "duration_ms", "intensity"}]}
                 events sorted by (start_ms, actuator), numbers with <= 4 fractional digits
  frame stream   "HAPTIX/1 rate=<int> actuators=10"
                 "<t_ms>;<v1>;<v2>;...;<v10>"  t_ms with 1 fractional digit,
                 each v with `precision` fractional digits, "\\n" terminated
                 "END"
  trials CSV     participant,condition,block,trial,direction,gradient
  responses CSV  participant,condition,block,trial,chosen_direction,chosen_gradient
  summary CSV    participant,condition,direction_pct,gradient_pct  (extra numeric columns are analysed too)
  tokens         schemes: rabbit-single rabbit-dual motion-intensity
                 directions: left-to-right right-to-left rear-right-to-front-left forward rear-left-to-front-right
                 gradients: up flat down
"""


class CliError(Exception):
    pass


def _add_timing(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("timing and intensity")
    g.add_argument("--bd", type=float, default=125.0, help="burst duration, ms (default 125)")
    g.add_argument("--isi", type=float, default=50.0, help="gap between pulses, ms (default 50)")
    g.add_argument("--ibi", type=float, default=100.0, help="gap between actuator blocks, ms (default 100)")
    g.add_argument("--period", type=float, default=450.0, help="motion vibration period d, ms (default 450)")
    g.add_argument("--uniform-level", type=int, default=4, help="level used by rabbit-single (default 4)")
    g.add_argument("--base", type=float, default=0.22, help="lowest intensity S1 (default 0.22)")
    g.add_argument("--jnd", type=float, default=0.3, help="relative step between levels (default 0.3)")
    g.add_argument("--levels", type=int, default=7, help="number of levels (default 7)")


def _timing(args) -> TimingConstants:
    return TimingConstants(bd=args.bd, isi=args.isi, ibi=args.ibi, d=args.period, uniform_level=args.uniform_level)


def _scale(args) -> IntensityScale:
    return build_scale(args.base, args.jnd, args.levels)


def _write(out: str, data: str | bytes) -> None:
    if out == "-":
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
    else:
        mode = "wb" if isinstance(data, bytes) else "w"
        with open(out, mode, **({} if mode == "wb" else {"newline": ""})) as fh:
            fh.write(data)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def cmd_encode(args) -> int:
    if args.vector:
        try:
            v = [float(c) for c in args.vector.split(",")]
        except ValueError:
            raise CliError(f"--vector expects x,y,z, got {args.vector!r}") from None
        if len(v) != 3:
            raise CliError(f"--vector expects three components, got {len(v)}")
        cue = quantize_vector(v, args.threshold)
    else:
        if not (args.direction and args.gradient):
            raise CliError("encode needs --direction and --gradient, or --vector")
        cue = Cue(Direction.parse(args.direction), Gradient.parse(args.gradient))
    timeline = encode(cue, Scheme.parse(args.scheme), _timing(args), _scale(args))
    _write(args.out, timeline.to_json())
    return 0


def cmd_decode(args) -> int:
    timeline = Timeline.from_json(_read(args.inp))
    scheme, cue = decode(timeline, _timing(args), _scale(args), args.tol)
    print(f"{scheme} {cue.direction} {cue.gradient}")
    return 0


def cmd_render(args) -> int:
    timeline = Timeline.from_json(_read(args.inp))
    _write(args.out, render_text(timeline, RenderConfig(args.rate, args.precision)))
    return 0


def cmd_serve(args) -> int:
    timeline = Timeline.from_json(_read(args.inp))
    config = RenderConfig(args.rate, args.precision)
    with FrameServer(timeline, config, args.listen, fast=args.fast) as server:
        host, port = server.address
        print(f"listening on {host}:{port}", file=sys.stderr, flush=True)
        try:
            n = 0
            while args.sessions is None or n < args.sessions:
                s = server.serve_one()
                n += 1
                flag = " truncated" if s.truncated else ""
                print(f"session {s.peer}: frames_sent={s.frames_sent} bytes_sent={s.bytes_sent}{flag}",
                      file=sys.stderr, flush=True)
        except KeyboardInterrupt:
            pass
    return 0


def cmd_scale(args) -> int:
    scale = _scale(args)
    for k, value in enumerate(scale.levels, start=1):
        print(f"S{k}\t{value:.6f}")
    return 0


def cmd_layout(args) -> int:
    sys.stdout.write(layout_table())
    return 0


def cmd_trials(args) -> int:
    if args.participants < 1:
        raise CliError("--participants must be at least 1")
    plans = [generate_trials(p, args.seed) for p in range(args.participants)]
    _write(args.out, trials_csv(plans))
    return 0


def cmd_score(args) -> int:
    plans = read_trials_csv(_read(args.plan))
    responses = read_responses_csv(_read(args.responses))
    _write(args.out, summary_csv(score(plans, responses)))
    return 0


def _summary_columns(text: str) -> dict[str, dict[str, list[float]]]:
    import csv
    import io

    reader = csv.DictReader(io.StringIO(text))
    fields = reader.fieldnames or []
    if "participant" not in fields or "condition" not in fields:
        raise CliError("summary CSV needs participant and condition columns")
    measures = [f for f in fields if f not in ("participant", "condition")]
    cells: dict[str, dict[str, dict[str, float]]] = {m: defaultdict(dict) for m in measures}
    for row in reader:
        for m in measures:
            cells[m][row["condition"]][row["participant"]] = float(row[m])
    out = {}
    for m in measures:
        by_condition = cells[m]
        subjects = sorted(set.intersection(*(set(v) for v in by_condition.values())), key=str)
        if len(subjects) != len({p for v in by_condition.values() for p in v}):
            raise CliError(f"{m}: every participant needs a value for every condition")
        out[m] = {c: [v[p] for p in subjects] for c, v in by_condition.items()}
    return out


def cmd_stats(args) -> int:
    for measure, columns in _summary_columns(_read(args.summaries)).items():
        sys.stdout.write(stats.report(measure, columns))
    return 0


def cmd_selfcheck(args) -> int:
    timing, scale = _timing(args), _scale(args)
    t0 = time.perf_counter()
    ok = 0
    failures = []
    for scheme in Scheme:
        for cue in all_cues():
            label = f"{scheme} {cue.direction} {cue.gradient}"
            try:
                got = decode(encode(cue, scheme, timing, scale), timing, scale)
            except ValueError as exc:
                failures.append(f"{label}: {exc}")
                continue
            if got == (scheme, cue):
                ok += 1
            else:
                failures.append(f"{label}: decoded as {got[0]} {got[1]}")
    total = len(Scheme) * len(all_cues())
    for line in failures:
        print(f"FAIL {line}")
    elapsed = time.perf_counter() - t0
    print(f"{ok}/{total} {'ok' if ok == total else 'FAILED'} ({elapsed * 1000:.1f} ms)")
    return 0 if ok == total else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vibrocue",
        description="Encode 3D directional cues as vibrotactile glove timelines, and analyse cue-recognition studies.",
        epilog=FORMATS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=FORMATS,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("encode", cmd_encode, "write the timeline JSON for one cue")
    p.add_argument("--scheme", required=True)
    p.add_argument("--direction")
    p.add_argument("--gradient")
    p.add_argument("--vector", help="x,y,z (x right, y up, z forward); overrides --direction/--gradient")
    p.add_argument("--threshold", type=float, default=ELEVATION_THRESHOLD_DEG,
                   help="elevation in degrees separating flat from up/down (default 22.5)")
    p.add_argument("--out", default="-")
    _add_timing(p)

    p = add("decode", cmd_decode, "print 'scheme direction gradient' recovered from a timeline's events")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--tol", type=float, default=FILE_TOLERANCE, help="intensity match tolerance (default 1e-4)")
    _add_timing(p)

    p = add("render", cmd_render, "sample a timeline into the frame stream format")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--rate", type=int, default=1000, help="samples per second (default 1000)")
    p.add_argument("--precision", type=int, default=4, help="fractional digits per intensity (default 4)")
    p.add_argument("--out", default="-")

    p = add("serve", cmd_serve, "stream a timeline's frames to every TCP client that connects")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--listen", required=True, help="host:port (port 0 picks a free port)")
    p.add_argument("--fast", action="store_true", help="send without real-time pacing")
    p.add_argument("--rate", type=int, default=1000)
    p.add_argument("--precision", type=int, default=4)
    p.add_argument("--sessions", type=int, default=None, help="exit after this many clients")

    p = add("scale", cmd_scale, "print the intensity ladder (level, value)")
    p.add_argument("--base", type=float, default=0.22)
    p.add_argument("--jnd", type=float, default=0.3)
    p.add_argument("--levels", type=int, default=7)

    add("layout", cmd_layout, "print actuator coordinates as a tab-separated table")

    p = add("trials", cmd_trials, "generate counterbalanced, shuffled trial plans as CSV")
    p.add_argument("--participants", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")

    p = add("score", cmd_score, "score responses against a plan; writes the summary CSV")
    p.add_argument("--plan", required=True)
    p.add_argument("--responses", required=True)
    p.add_argument("--out", default="-")

    p = add("stats", cmd_stats, "median (IQR), Friedman and Bonferroni-corrected Wilcoxon post-hoc per measure")
    p.add_argument("--summaries", required=True)

    p = add("selfcheck", cmd_selfcheck, "encode and decode every scheme x cue and report the round-trip count")
    _add_timing(p)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CliError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

import argparse
import sys
from fractions import Fraction

from .scenarios import SCENARIOS, ScenarioConfig, emit_report, render_report, run_scenario


def _thetas(text: str):
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            t = Fraction(part)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad theta {part!r}; expected k/6")
        if not 0 <= t < 1 or (6 * t).denominator != 1:
            raise argparse.ArgumentTypeError(f"theta {part} must be k/6 with 0 <= k < 6")
        out.append(t)
    if not out:
        raise argparse.ArgumentTypeError("no theta values given")
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stabglue", description="Run exact verification scenarios")
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run one scenario and write a JSON report")
    r.add_argument("--scenario", required=True, choices=SCENARIOS)
    r.add_argument("--base", default="a2", choices=("a2", "k2", "vect"))
    r.add_argument("--prime", type=int, default=2, choices=(2, 3))
    r.add_argument("--max-dim", type=int, default=4)
    r.add_argument("--theta", type=_thetas, default=None, help="comma separated, e.g. 0,1/3,2/3")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", default=None, help="report path (stdout when omitted)")
    r.add_argument("--no-oracle", action="store_true", help="skip brute-force comparisons")
    r.add_argument("--timing", action="store_true", help="include wall-clock (breaks byte-identical reports)")
    sub.add_parser("list", help="list scenario names")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "list":
        print("\n".join(SCENARIOS))
        return 0
    kw = {}
    if args.theta is not None:
        kw["thetas"] = args.theta
    try:
        cfg = ScenarioConfig(args.scenario, base=args.base, prime=args.prime, max_dim=args.max_dim,
                             seed=args.seed, out=args.out, oracle=not args.no_oracle, timing=args.timing, **kw)
    except ValueError as e:
        print(f"stabglue: {e}", file=sys.stderr)
        return 2
    rep = run_scenario(cfg)
    try:
        code = emit_report(rep, args.out)
    except OSError as e:
        print(f"stabglue: {e}", file=sys.stderr)
        return 2
    if not args.out:
        sys.stdout.write(render_report(rep))
    s = rep.summary()
    print(f"{cfg.scenario}: {s['pass']} pass, {s['fail']} fail, {s['skipped']} skipped", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

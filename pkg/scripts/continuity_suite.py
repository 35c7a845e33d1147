"""Compare diamond distances with aligned-dilation distances on seeded channel pairs."""
import argparse
import json

from privcorr.experiments import ContinuitySuiteConfig, config_dict, run_continuity_suite


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--restarts", type=int, default=32)
    ap.add_argument("--out", default="continuity_suite.json")
    args = ap.parse_args()
    cfg = ContinuitySuiteConfig(n_pairs=args.n, seed=args.seed, restarts=args.restarts)
    rows = run_continuity_suite(cfg)
    for r in rows:
        if r["lower_status"] != "pass":
            print(f"inconclusive: pair {r['index']} dd={r['dd']:.4f} align={r['align']:.4f} t={r['t']}")
    n5 = sum(r["upper_ok"] for r in rows)
    n6 = sum(r["lower_status"] == "pass" for r in rows)
    print(f"dd <= 2a: {n5}/{len(rows)}   a^2 <= dd: {n6}/{len(rows)}")
    with open(args.out, "w") as fh:
        json.dump({"config": config_dict(cfg), "rows": rows}, fh, indent=1)


if __name__ == "__main__":
    main()

"""Check that the exact (linear-algebra) tests agree with the SDP certifiers at epsilon 1e-6."""
import argparse
import json
from collections import Counter

from privcorr.experiments import OracleSuiteConfig, config_dict, run_oracle_suite


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="oracle_suite.json")
    args = ap.parse_args()
    cfg = OracleSuiteConfig(n_channels=args.n, seed=args.seed)
    rows = run_oracle_suite(cfg)
    agree = Counter((r["family"], r["private_agree"] and r["correctable_agree"]) for r in rows)
    for (fam, ok), n in sorted(agree.items()):
        print(f"{fam:<24} {'agree' if ok else 'DISAGREE'} x{n}")
    with open(args.out, "w") as fh:
        json.dump({"config": config_dict(cfg), "rows": rows}, fh, indent=1)


if __name__ == "__main__":
    main()

"""Threshold checks, complement-duality audit and random-encoder probe for secret-sharing schemes."""
import argparse

from privcorr.secretshare import (all_subsets, cgl23_scheme, complement_duality_audit, infeasibility_probe,
                                  party_label, verify_threshold)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--probe", nargs=2, type=int, action="append", metavar=("N", "K"),
                    help="probe (n, k) with n >= 2k; repeatable (default: 2 1 and 4 2)")
    args = ap.parse_args()
    s = cgl23_scheme()
    print("((2,3)) qutrit scheme")
    for r in verify_threshold(s).rows:
        print(f"  {r.label:<12} {r.kind:<12} eps {r.epsilon:.2e}")
    for subset in all_subsets(s.n):
        a = complement_duality_audit(s, subset)
        print(f"  audit {party_label(subset):<12} complementary={a.complementary} "
              f"corr {a.eps_correctable:.1e} -> priv(rest) {a.eps_private_rest:.1e}; "
              f"priv {a.eps_private:.1e} -> corr(rest) {a.eps_correctable_rest:.1e}")
    for n, k in args.probe or [(2, 1), (4, 2)]:
        rep = infeasibility_probe(n, k, trials=args.trials, seed=args.seed)
        print(f"(({k},{n})) probe: min violation {rep.min_violation:.3f} over {args.trials} encoders, "
              f"all above {rep.threshold}: {rep.ok}")


if __name__ == "__main__":
    main()

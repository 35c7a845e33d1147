"""Regenerate the JSON fixtures shipped in ``privcorr/fixtures``."""
from pathlib import Path

import numpy as np

from privcorr.channels import SubsystemDecomposition, depolarizing_channel, identity_channel
from privcorr.complement import complement
from privcorr.instances import RHO1, RHO2, Z1, phase_flip_channel, phase_flip_code
from privcorr.secretshare import cgl23_scheme
from privcorr.serialize import (channel_to_json, decomposition_to_json, matrix_to_json, scheme_to_json,
                                write_json)

OUT = Path(__file__).resolve().parents[1] / "src" / "privcorr" / "fixtures"


def main() -> None:
    e, code = phase_flip_channel(), phase_flip_code()
    write_json(channel_to_json(e), OUT / "phase_flip.json")
    write_json(decomposition_to_json(code), OUT / "phase_flip_code.json")
    write_json({"rho1": matrix_to_json(RHO1), "rho2": matrix_to_json(RHO2), "Z1": matrix_to_json(Z1),
                "P": matrix_to_json(RHO1 + RHO2),
                "description": "E#(sigma) = tr(sigma) rho1 + tr(sigma Z1) rho2 in the Kraus-index environment basis",
                "complement": channel_to_json(complement(e))},
               OUT / "phase_flip_complement_expected.json")
    write_json(scheme_to_json(cgl23_scheme()), OUT / "cgl23.json")
    write_json(channel_to_json(identity_channel(2)), OUT / "identity_qubit.json")
    write_json(channel_to_json(depolarizing_channel(2)), OUT / "depolarizing_qubit.json")
    write_json(decomposition_to_json(SubsystemDecomposition.full(1, 2)), OUT / "qubit_whole.json")
    print(f"fixtures written to {OUT}")


if __name__ == "__main__":
    main()

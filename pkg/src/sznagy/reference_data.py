"""Published reference data bundled with the package.

The Kraus matrices, gate strings and angle tables are transcribed verbatim
(4-decimal rounding included). The experimental fidelity tables live in CSV
files under ``data/`` and are display-only reference values.
"""

import csv
from importlib import resources

import numpy as np

from .channels import KrausSet
from .config import DEFAULT_TOLERANCES as TOL

# Independent phase damping, gamma1 = 1.4, gamma2 = 1.5, t = 2.
PHASE_DAMPING_KRAUS = (
    np.diag([-0.4723, 0.4723, 0.4723, -0.4723]).astype(complex),
    np.diag([0.0181 - 0.4961j, 0.0181 - 0.4961j, -0.0181 + 0.4961j, -0.0181 + 0.4961j]),
    np.diag([-0.0085 - 0.5019j, 0.0085 + 0.5019j, -0.0085 - 0.5019j, 0.0085 + 0.5019j]),
    np.diag([-0.5276 - 0.007j] * 4),
)

MFGP_KRAUS = (
    np.array([
        [0.1231 - 0.0877j, -0.0038 + 0.0026j, -0.0077 + 0.0085j, 0.0023 + 0.0004j],
        [0.0122 - 0.0279j, -0.1899 - 0.1181j, 0.0101 + 0.0085j, 0.0097 + 0.006j],
        [-0.0174 + 0.0165j, -0.0073 + 0.0042j, -0.3573 + 0.4876j, 0.0167 - 0.0073j],
        [-0.0036 - 0.0034j, -0.0056 + 0.0133j, -0.0009 + 0.0275j, 0.5454 + 0.4572j],
    ]),
    np.array([
        [-0.0434 - 0.4568j, 0.0061 + 0.0085j, 0.0095 + 0.0121j, -0.0055 - 0.0064j],
        [0.0329 + 0.0096j, 0.181 - 0.4594j, -0.0029 + 0.0105j, -0.0003 + 0.0002j],
        [0.0017 - 0.0235j, 0.0036 - 0.003j, -0.35 - 0.3762j, 0.0141 - 0.0184j],
        [-0.0055 - 0.0042j, 0.0124 - 0.007j, 0.012 + 0.0275j, 0.3231 - 0.3787j],
    ]),
    np.array([
        [-0.4842 - 0.5645j, 0.0305 + 0.0057j, 0.027 - 0.0027j, -0.0011 + 0.0033j],
        [-0.0206 + 0.0166j, -0.327 + 0.0929j, 0.0007 - 0.0019j, 0.0034 - 0.0026j],
        [0.0102 + 0.0216j, -0.0024 + 0.0064j, 0.3035 - 0.2407j, 0.0096 + 0.0199j],
        [-0.0005 - 0.0058j, 0.0024 + 0.0041j, 0.015 + 0.006j, -0.0094 + 0.4166j],
    ]),
    np.array([
        [0.4475 + 0.0416j, -0.0139 + 0.0256j, -0.0099 + 0.0021j, 0.0055 + 0.0044j],
        [-0.0239 - 0.0035j, -0.7081 + 0.2924j, -0.0143 - 0.0018j, 0.0063 - 0.0201j],
        [0.0027 - 0.0084j, 0.0055 + 0.0079j, -0.1662 - 0.4034j, 0.0107 - 0.0154j],
        [0.0045 - 0.0062j, 0.0167 - 0.0093j, -0.0253 + 0.0106j, 0.1022 - 0.1527j],
    ]),
)


def phase_damping_kraus():
    return KrausSet(PHASE_DAMPING_KRAUS, tolerance=TOL.completeness_experimental)


def mfgp_kraus():
    return KrausSet(MFGP_KRAUS, tolerance=TOL.completeness_experimental)


# Products as printed: written right-to-left, so the rightmost gate acts first.
GATE_MACROS = {"UCNN": "CNOT_31 . CNOT_21"}

PHASE_DAMPING_GATE_STRINGS = {
    "A1": (
        "1R_x-^pi . 1R_y-^pi/2 . UCNN . CNOT_32 . 2R_z-^pi/2 . CNOT_32 . 1R_x-^pi . 1R_y-^theta1"
        " . UCNN . 1R_x-^pi . 1R_z-^3pi/2 . UCNN . 1R_z-^pi/2",
        {"theta1": 0.5870},
    ),
    "A2": (
        "1R_x-^pi . 1R_y-^pi/2 . CNOT_21 . 1R_x-^theta3 . 1R_y-^theta2 . CNOT_21 . 1R_x-^theta1"
        " . 1R_z-^pi/2 . CNOT_21 . 2R_z-^3pi/2",
        {"theta1": 3.0803, "theta2": 0.5329, "theta3": 1.6059},
    ),
    "A3": (
        "1R_x-^pi . 1R_y-^pi/2 . CNOT_31 . 1R_x-^theta3 . 1R_y-^theta2 . CNOT_31 . 1R_x-^theta1"
        " . 1R_z-^pi/2 . CNOT_31 . 3R_z-^3pi/2",
        {"theta1": 3.1711, "theta2": 0.5193, "theta3": 1.5536},
    ),
    "A4": (
        "1R_z-^theta3 . 1R_y-^theta2 . 1R_z-^theta1",
        {"theta1": 3.1549, "theta2": 2.0299, "theta3": 0.0133},
    ),
}

# Shared template for every MFGP dilation, angles theta0..theta17 from the table below.
MFGP_TEMPLATE = (
    "1R_x-^theta17 . 1R_y-^theta16 . CNOT_31 . 1R_x-^theta15 . 1R_y-^theta14 . CNOT_21"
    " . 1R_x-^theta13 . 1R_y-^theta12 . CNOT_31 . 1R_x-^theta11 . 1R_y-^theta10 . CNOT_21"
    " . 1R_x-^theta9 . 1R_y-^theta8 . CNOT_31 . 1R_x-^theta7 . 1R_y-^theta6 . CNOT_31"
    " . 1R_x-^theta5 . 1R_z-^theta4 . CNOT_21 . 1R_z-^theta3 . CNOT_31 . 1R_z-^theta2"
    " . CNOT_21 . 1R_z-^theta1 . 3R_z-^theta0"
)

MFGP_ANGLES = {
    "A1": (1.5708, 6.2759, 5.7332, 0.5359, 4.2067, 2.8192, 1.8641, 2.2842, 0.4323,
           3.1416, 0.4323, 2.2856, 1.0560, 2.3100, 0.6701, 1.1972, 1.6675, 2.9373),
    "A2": (4.7124, 0.0486, 0.0306, 0.1169, 1.3599, 3.0589, 1.5181, 1.0045, 0.0979,
           3.1416, 0.0979, 0.6158, 0.1859, 2.9610, 0.4389, 0.1460, 1.4041, 2.1115),
    "A3": (4.7124, 6.1354, 0.1041, 5.7425, 2.4207, 3.4918, 1.2934, 5.3556, 0.4432,
           3.1416, 0.4432, 5.0076, 0.6384, 2.8007, 0.9546, 3.6109, 2.5217, 2.4411),
    "A4": (1.5708, 0.1079, 0.8518, 5.6472, 4.9160, 2.6544, 1.2327, 1.0113, 0.5851,
           3.1416, 0.5851, 3.7509, 1.1481, 5.0366, 1.3207, 4.3664, 1.8259, 3.8623),
}


def mfgp_angle_map(name):
    return {f"theta{i}": v for i, v in enumerate(MFGP_ANGLES[name])}


# Rotation angle quoted twice for the A1 circuit: as a multiple of pi/2 and in radians.
A1_THETA1_HALF_PI_FRACTION = 0.3737
A1_THETA1 = 0.5870

HARDWARE_PROCESS_FIDELITY = {"phase-damping": 0.9148, "mfgp": 0.8824}

STATE_LABELS = ("00", "01", "0+", "0-", "10", "11", "1+", "1-",
                "+0", "+1", "++", "+-", "-0", "-1", "-+", "--")


def _read_csv(name):
    with resources.files("sznagy.data").joinpath(name).open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def hardware_overlap_table(experiment):
    """Per-state, per-Kraus overlap values reported for ``experiment`` (display only)."""
    fname = {"phase-damping": "hardware_overlaps_phase_damping.csv", "mfgp": "hardware_overlaps_mfgp.csv"}[experiment]
    rows = _read_csv(fname)
    return {r["state"]: [float(r[k]) for k in ("A1", "A2", "A3", "A4")] for r in rows}


def hardware_fidelity_table(experiment):
    fname = {"phase-damping": "hardware_fidelities_phase_damping.csv", "mfgp": "hardware_fidelities_mfgp.csv"}[experiment]
    return {r["state"]: float(r["fidelity"]) for r in _read_csv(fname)}

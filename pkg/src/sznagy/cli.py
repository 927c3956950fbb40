"""Command-line interface.

Every verb accepts ``--config`` (a RunConfig JSON file) plus overrides for
its individual fields. Exit codes: 0 success, 1 usage error, 2 invalid
input or data, 3 numerical failure.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from . import experiments as ex
from .channels import ChiMatrix, KrausSet, Superoperator, chi_to_kraus, kraus_to_chi, process_fidelity, superop_to_chi
from .decompose import decompose_unitary
from .dilation import DilationUnitary, dilate
from .errors import SzNagyError, ValidationError
from .gates import RotationConvention, circuit_unitary, parse_gate_list, phase_distance, run_circuit, serialize_gate_list
from .serialization import (
    chi_to_json,
    dump_json,
    kraus_to_json,
    load_json,
    matrix_document_from_json,
    record_from_json,
    record_to_json,
    superop_to_json,
    unitary_to_json,
)
from .tomography import TomographyRecord, add_measurement_noise, cptp_project_qpt, input_basis, linear_inversion_qpt

log = logging.getLogger("sznagy")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help="RunConfig JSON file; flags below override its fields")
    g.add_argument("--seed", type=int)
    g.add_argument("--out", dest="out_dir", help="output directory")
    g.add_argument("--noise-sigma", type=float)
    g.add_argument("--renormalize", action="store_true", default=None,
                   help="rescale an incomplete Kraus set by M^-1/2")
    g.add_argument("--convention", help="rotation convention id, e.g. plus-negate")
    g.add_argument("--gamma1", type=float)
    g.add_argument("--gamma2", type=float)
    g.add_argument("--t", type=float, help="evolution time")
    g.add_argument("--workers", type=int, help="threads for per-state simulation")
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="sznagy", description="Open-system simulation by unitary dilation of Kraus operators.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("gen-channel", parents=[common], help="write superoperator, chi and Kraus files of the dephasing channel")

    p = sub.add_parser("kraus", parents=[common], help="extract Kraus operators from a chi or superoperator file")
    p.add_argument("input")

    p = sub.add_parser("dilate", parents=[common], help="write one dilation unitary per Kraus operator")
    p.add_argument("kraus_file")

    p = sub.add_parser("decompose", parents=[common], help="compile unitary files to gate lists")
    p.add_argument("unitary_files", nargs="+")

    p = sub.add_parser("simulate", parents=[common], help="run the 16 basis states through the dilated channel")
    p.add_argument("kraus_file")
    p.add_argument("--gates", nargs="+", help="gate-list files, one per Kraus operator (default: compile)")

    p = sub.add_parser("qpt", parents=[common], help="process tomography of a record file")
    p.add_argument("record")
    p.add_argument("--method", choices=("linear", "cptp"), default="linear")
    p.add_argument("--reference", help="chi file to report the process fidelity against")

    p = sub.add_parser("reproduce", help="end-to-end experiment reports")
    rsub = p.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    rsub.add_parser("phase-damping", parents=[common])
    q = rsub.add_parser("mfgp", parents=[common])
    q.add_argument("--kraus-file", help="Kraus JSON file (default: bundled experimental set)")

    sub.add_parser("verify-appendix", parents=[common], help="check published gate lists against their dilations")
    return parser


def _config(args):
    cfg = ex.RunConfig.from_file(args.config) if args.config else ex.RunConfig()
    overrides = {}
    for name in ("seed", "out_dir", "noise_sigma", "convention", "gamma1", "gamma2", "t", "workers"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "renormalize", None):
        overrides["renormalize_kraus"] = True
    if getattr(args, "kraus_file", None) and args.command == "reproduce":
        overrides["kraus_file"] = args.kraus_file
    return replace(cfg, **overrides) if overrides else cfg


def _out(cfg):
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(obj, path):
    dump_json(obj, path)
    print(f"wrote {path}")


def _load_kraus(path, cfg):
    return ex.prepare_kraus(ex.load_kraus_file(path), cfg.renormalize_kraus)


def cmd_gen_channel(args, cfg):
    ch = ex.dephasing_channel(cfg.dephasing)
    out = _out(cfg)
    _write(superop_to_json(ch["superoperator"]), out / "superop.json")
    _write(chi_to_json(ch["chi"]), out / "chi.json")
    _write(kraus_to_json(ch["kraus"]), out / "kraus.json")
    norms = ", ".join(f"{n:.4f}" for n in ch["kraus"].norms())
    print(f"{len(ch['kraus'])} Kraus operators, norms {norms}")


def cmd_kraus(args, cfg):
    doc = matrix_document_from_json(load_json(args.input))
    if isinstance(doc, Superoperator):
        doc = superop_to_chi(doc)
    if not isinstance(doc, ChiMatrix):
        raise ValidationError(f"{args.input}: expected a chi or superoperator document")
    kraus = chi_to_kraus(doc)
    _write(kraus_to_json(kraus), _out(cfg) / "kraus.json")
    print(f"{len(kraus)} Kraus operators, completeness defect {kraus.completeness_defect:.3e}")


def cmd_dilate(args, cfg):
    kraus = _load_kraus(args.kraus_file, cfg)
    out = _out(cfg)
    for i, a in enumerate(kraus.operators):
        u = dilate(a, i)
        _write(unitary_to_json(u), out / f"unitary_{i + 1}.json")
        print(f"  A{i + 1}: norm {kraus.norms()[i]:.4f}, unitarity defect {u.unitarity_defect():.2e}")


def cmd_decompose(args, cfg):
    out = _out(cfg)
    for path in args.unitary_files:
        doc = matrix_document_from_json(load_json(path))
        if not isinstance(doc, DilationUnitary):
            raise ValidationError(f"{path}: expected a unitary document")
        circuit = decompose_unitary(doc.matrix)
        dist = phase_distance(circuit_unitary(circuit), doc.matrix)
        c = circuit.counts()
        header = f"source {Path(path).name}\ncnot {c['cnot']} rotation {c['rotation']}\nphase_distance {dist:.3e}"
        target = out / f"{Path(path).stem}.gates.txt"
        target.write_text(serialize_gate_list(circuit, header=header), encoding="utf-8")
        print(f"wrote {target}: {c['cnot']} CNOT, {c['rotation']} rotations, distance {dist:.2e}")


def cmd_simulate(args, cfg):
    kraus = _load_kraus(args.kraus_file, cfg)
    convention = RotationConvention.from_id(cfg.convention)
    if args.gates:
        if len(args.gates) != len(kraus):
            raise ValidationError(f"{len(args.gates)} gate lists for {len(kraus)} Kraus operators")
        circuits = [parse_gate_list(Path(g).read_text(encoding="utf-8")) for g in args.gates]
    else:
        circuits = [decompose_unitary(dilate(a, i).matrix) for i, a in enumerate(kraus.operators)]
        convention = RotationConvention.from_id("plus-negate")
    basis = input_basis()
    outputs = []
    for j, ket in enumerate(basis.kets):
        total = np.zeros((4, 4), dtype=complex)
        for i, circ in enumerate(circuits):
            psi = run_circuit(circ, np.concatenate([ket, np.zeros(4)]), convention)
            block = np.outer(psi[:4], np.conj(psi[:4]))
            total += add_measurement_noise(block, cfg.noise_sigma, [cfg.seed, j, i])
        outputs.append(total)
    record = TomographyRecord(list(basis.states), outputs, cfg.noise_sigma, cfg.seed)
    _write(record_to_json(record), _out(cfg) / "record.json")


def cmd_qpt(args, cfg):
    record = record_from_json(load_json(args.record))
    chi = linear_inversion_qpt(record) if args.method == "linear" else cptp_project_qpt(record)
    _write(chi_to_json(chi), _out(cfg) / "chi_estimate.json")
    print(f"min eigenvalue {np.linalg.eigvalsh(chi.matrix)[0]:.3e}, TP defect {chi.tp_defect():.3e}")
    if args.reference:
        ref = matrix_document_from_json(load_json(args.reference))
        if isinstance(ref, KrausSet):
            ref = kraus_to_chi(ref)
        elif isinstance(ref, Superoperator):
            ref = superop_to_chi(ref)
        print(f"process fidelity vs reference: {process_fidelity(chi, ref):.10f}")


def cmd_reproduce(args, cfg):
    if args.experiment == "phase-damping":
        report = ex.reproduce_phase_damping(cfg)
    else:
        report = ex.reproduce_mfgp(cfg.kraus_file, cfg)
    for p in ex.emit_report(report, cfg.out_dir):
        print(f"wrote {p}")
    ref = report.reference.get("process_fidelity")
    print(f"process fidelity {report.process_fidelity:.10f} (experimental reference {ref})")
    print(f"min per-state fidelity {min(report.per_state_fidelities):.10f}")
    for g in report.gate_counts:
        print(f"  U{g['kraus_index'] + 1}: {g['cnot']} CNOT, {g['rotation']} rotations")


def cmd_verify_gate_lists(args, cfg):
    result = ex.verify_published_gate_lists(cfg)
    _write(result, _out(cfg) / "published_gate_lists.json")
    names = [c for c in result["entries"][0]["published_distances"]]
    print(f"{'gate list':<18}" + "".join(f"{n:>14}" for n in names) + f"{'own':>12}")
    for e in result["entries"]:
        label = f"{e['experiment']}:{e['dilation']}"
        row = "".join(f"{e['published_distances'][n]:>14.3e}" for n in names)
        print(f"{label:<18}{row}{e['own_distance']:>12.1e}")
    tc = result["theta1_consistency"]
    print(f"theta1: {tc['fraction_value']:.6f} vs {tc['radian_value']} (difference {tc['difference']:.1e})")


COMMANDS = {
    "gen-channel": cmd_gen_channel,
    "kraus": cmd_kraus,
    "dilate": cmd_dilate,
    "decompose": cmd_decompose,
    "simulate": cmd_simulate,
    "qpt": cmd_qpt,
    "reproduce": cmd_reproduce,
    "verify-appendix": cmd_verify_gate_lists,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _config(args)
        COMMANDS[args.command](args, cfg)
    except SzNagyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``rubycode {verify-algebra,spectrum,gates,braid}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass


from . import __version__
from .anyons import AnyonConfig, Board, BraidSchedule, oracle_schedule_phase, run_schedule
from .errors import CapacityError, ConstructionError, EncodingError, IllegalMoveError
from .lattice import (CouplingParams, LatticePatch, all_plaquette_operators, build_hamiltonian,
                      build_patch, chain_cluster, check_patch)
from .pauli import PauliString, commutes, spectrum, symplectic_rank

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
REPORT_SCHEMA = "rubycode.report/1"
MAX_SPECTRUM_QUBITS = 20


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    rows: int | None
    cols: int | None
    boundary: str
    couplings: CouplingParams
    fmt: str
    out: str | None
    seed: int

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        rows = cols = None
        if args.patch is not None:
            rows, cols = parse_shape(args.patch)
        j = (args.jx, args.jy, args.jz)
        if not all(math.isfinite(v) for v in j):
            raise UsageError("couplings must be finite")
        return cls(args.command, rows, cols, args.boundary, CouplingParams(*j),
                   args.format, args.out, args.seed)

    def patch(self, default=(1, 1)) -> LatticePatch:
        rows, cols = (self.rows, self.cols) if self.rows is not None else default
        try:
            return build_patch(rows, cols, self.boundary)
        except (ConstructionError, ValueError) as exc:
            raise UsageError(str(exc)) from None


def parse_shape(text: str) -> tuple[int, int]:
    try:
        r, c = text.lower().split("x")
        rows, cols = int(r), int(c)
    except ValueError:
        raise UsageError(f"--patch expects ROWSxCOLS, got {text!r}") from None
    if rows < 1 or cols < 1:
        raise UsageError("patch dimensions must be positive")
    return rows, cols


def _envelope(cfg: RunConfig, body: dict, patch: LatticePatch | None) -> dict:
    out = {"schema": REPORT_SCHEMA, "command": cfg.command, "version": __version__,
           "couplings": {"jx": cfg.couplings.jx, "jy": cfg.couplings.jy, "jz": cfg.couplings.jz}}
    if patch is not None:
        out["patch"] = {"shape": list(patch.shape), "boundary": patch.boundary,
                        "fingerprint": patch.fingerprint()}
    out.update(body)
    return out


def _emit(cfg: RunConfig, report: dict, table: str) -> None:
    text = json.dumps(report, sort_keys=True, indent=1) if cfg.fmt == "json" else table
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# verify-algebra


def _random_pauli(rng: random.Random, n: int) -> PauliString:
    return PauliString(n, rng.getrandbits(n), rng.getrandbits(n), rng.randrange(4))


def pauli_consistency(n: int, samples: int, seed: int) -> int:
    """Failures of ``commutes(a, b) <=> a*b == b*a`` on random pairs."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        a, b = _random_pauli(rng, n), _random_pauli(rng, n)
        ab, ba = a * b, b * a
        same = ab == ba
        if same != commutes(a, b) or (not same and ab != -ba):
            failures += 1
    return failures


def cmd_verify_algebra(cfg: RunConfig, patch: LatticePatch, samples: int = 200) -> tuple[int, dict]:
    checks = check_patch(patch)
    gens = all_plaquette_operators(patch)
    rank = symplectic_rank(gens) if gens else 0
    failures = pauli_consistency(min(patch.vertex_count, 64), samples, cfg.seed)
    body = {"checks": [c.as_dict() for c in checks],
            "plaquettes": len(patch.plaquettes),
            "symplectic_rank": rank,
            "global_dependencies": 2 * len(patch.plaquettes) - rank,
            "pauli_consistency": {"samples": samples, "seed": cfg.seed, "failures": failures}}
    ok = all(c.passed for c in checks) and failures == 0
    body["passed"] = ok
    return (EXIT_OK if ok else EXIT_FAIL), _envelope(cfg, body, patch)


def _algebra_table(rep: dict) -> str:
    lines = [f"patch {rep['patch']['shape'][0]}x{rep['patch']['shape'][1]} "
             f"{rep['patch']['boundary']}  fingerprint {rep['patch']['fingerprint']}"]
    for c in rep["checks"]:
        lines.append(f"  {'PASS' if c['passed'] else 'FAIL'}  {c['name']}"
                     + (f"  ({c['detail']})" if c.get("detail") else ""))
    lines.append(f"  plaquettes {rep['plaquettes']}  rank {rep['symplectic_rank']}  "
                 f"global dependencies {rep['global_dependencies']}")
    pc = rep["pauli_consistency"]
    lines.append(f"  random Pauli pairs {pc['samples']} (seed {pc['seed']}): "
                 f"{pc['failures']} failures")
    lines.append("RESULT " + ("PASS" if rep["passed"] else "FAIL"))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# spectrum


def cmd_spectrum(cfg: RunConfig, patch: LatticePatch) -> tuple[int, dict]:
    from .spin_boson import (MAX_EQUIVALENCE_TRIANGLES, build_effective_hamiltonian,
                             effective_spectrum, verify_mapping_equivalence)

    if patch.vertex_count > MAX_SPECTRUM_QUBITS:
        raise CapacityError(f"{patch.vertex_count} spins exceeds the {MAX_SPECTRUM_QUBITS}-spin "
                            "limit for spectra")
    J = cfg.couplings
    micro = spectrum(build_hamiltonian(patch, J))
    body: dict = {"triangles": patch.n_sites, "microscopic": micro.as_dict()}
    if J.jz > 0 and patch.n_sites <= MAX_EQUIVALENCE_TRIANGLES:
        scale = 4.0 * J.jz
        eff = effective_spectrum(build_effective_hamiltonian(patch, J))
        body["effective"] = {
            "calibration": f"E_micro = 4*J_z*E_eff = {scale:g}*E_eff",
            "levels_effective_frame": [[float(e), int(d)] for e, d in eff],
            "levels_micro_frame": [[float(scale * e), int(d)] for e, d in eff]}
        body["equivalence"] = verify_mapping_equivalence(patch, J).as_dict()
        ok = body["equivalence"]["max_spectral_deviation"] <= 1e-10
    else:
        body["effective"] = None
        body["effective_note"] = ("effective frame needs J_z > 0" if J.jz <= 0 else
                                  f"equivalence limited to {MAX_EQUIVALENCE_TRIANGLES} triangles")
        ok = True
    body["passed"] = ok
    return (EXIT_OK if ok else EXIT_FAIL), _envelope(cfg, body, patch)


def _spectrum_table(rep: dict) -> str:
    m = rep["microscopic"]
    lines = [f"{rep['triangles']} triangle(s), dimension {m['dimension']}"
             + ("" if m["complete"] else " (lowest levels only)"),
             "microscopic levels (energy x degeneracy):"]
    lines += [f"  {e: .12g} x {d}" for e, d in zip(m["eigenvalues"], m["degeneracies"])]
    if rep.get("effective"):
        lines.append(rep["effective"]["calibration"])
        lines += [f"  {e: .12g} x {d}" for e, d in rep["effective"]["levels_micro_frame"]]
        eq = rep["equivalence"]
        lines.append(f"max deviation: operator {eq['max_operator_deviation']:.3g}, "
                     f"spectrum {eq['max_spectral_deviation']:.3g}")
    elif rep.get("effective_note"):
        lines.append(f"effective model skipped: {rep['effective_note']}")
    lines.append("RESULT " + ("PASS" if rep["passed"] else "FAIL"))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# gates


def cmd_gates(cfg: RunConfig, scheme: str, control=None, target=None, recipe=None,
              oracle: bool = False) -> tuple[int, dict]:
    from .gates import SCHEMES, gate_patch, verify_scheme

    schemes = SCHEMES if scheme == "all" else (scheme,)
    reports = [verify_scheme(s, control, target, recipe, oracle) for s in schemes]
    refused = [r.error for r in reports if r.error]
    body = {"rows_passed": sum(r.rows_passed for r in reports),
            "rows_total": sum(len(r.rows) for r in reports),
            "mode": "loop oracle" if oracle else "abstract statistics",
            "schemes": [r.to_dict() for r in reports]}
    body["passed"] = all(r.passed for r in reports)
    if refused:
        return EXIT_USAGE, _envelope(cfg, body, gate_patch())
    return (EXIT_OK if body["passed"] else EXIT_FAIL), _envelope(cfg, body, gate_patch())


def _fmt_matrix(m) -> list[str]:
    def cell(z):
        if isinstance(z, list):
            return f"{z[0]:+.3g}{z[1]:+.3g}i"
        return f"{z:+.3g}"
    return ["    [" + " ".join(f"{cell(z):>7}" for z in row) + " ]" for row in m]


def _gates_table(rep: dict) -> str:
    lines = []
    for s in rep["schemes"]:
        lines.append(f"scheme {s['scheme']}: control {s['control_color']}, "
                     f"target {s['target_color']}, recipe {s['recipe']}")
        if s["error"]:
            lines.append(f"  refused: {s['error']}")
            continue
        lines.append("  logical  physical              expected  actual")
        for r in s["rows"]:
            lines.append(f"  |{r['logical']}>    {r['physical']:<20}  {r['expected']:+d}"
                         f"        {r['actual']:+d}   {'PASS' if r['pass'] else 'FAIL'}")
        for q, checks in s["single_qubit"].items():
            bad = [k for k, v in checks.items() if not v]
            lines.append(f"  {q} X/Z algebra: " + ("ok" if not bad else "FAIL " + ", ".join(bad)))
        if s["cnot"]:
            lines.append(f"  CNOT [{s['cnot']['convention']}], unitary {s['cnot']['unitary']}, "
                         f"deviation {s['cnot']['deviation_from_canonical']:.2g}")
            lines += _fmt_matrix(s["cnot"]["matrix"])
        if s["note"]:
            lines.append(f"  note: {s['note']}")
    lines.append(f"rows {rep['rows_passed']}/{rep['rows_total']}  RESULT "
                 + ("PASS" if rep["passed"] else "FAIL"))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# braid


def load_schedule(path: str) -> tuple[AnyonConfig, BraidSchedule, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read schedule {path!r}: {exc}") from None
    try:
        schedule = BraidSchedule.from_dict(data)
        config = AnyonConfig.from_dict(data.get("config", {}))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid schedule: {exc}") from None
    return config, schedule, data


def cmd_braid(cfg: RunConfig, schedule_path: str, oracle: bool = False) -> tuple[int, dict]:
    config, schedule, data = load_schedule(schedule_path)
    if cfg.rows is None and "board" in data:
        rows, cols = parse_shape(str(data["board"]))
        patch = build_patch(rows, cols, "open")
    else:
        patch = cfg.patch(default=(6, 6))
    if patch.boundary != "open":
        raise UsageError("braids run on open patches")
    board = Board.from_patch(patch)
    body: dict = {"initial": config.to_dict(), "moves": len(schedule.moves)}
    try:
        result = run_schedule(config, schedule, board)
    except IllegalMoveError as exc:
        body.update({"error": str(exc), "move_index": exc.index, "passed": False})
        return EXIT_FAIL, _envelope(cfg, body, patch)
    body.update(result.to_dict())
    body["passed"] = True
    if oracle:
        try:
            op = oracle_schedule_phase(patch, config, schedule)
        except (ValueError, IllegalMoveError) as exc:
            body["oracle"] = {"error": str(exc)}
        else:
            body["oracle"] = {"phase": op, "agrees": op == result.phase}
            body["passed"] = op == result.phase
    return (EXIT_OK if body["passed"] else EXIT_FAIL), _envelope(cfg, body, patch)


def _braid_table(rep: dict) -> str:
    if "error" in rep:
        return f"illegal schedule: {rep['error']}\nRESULT FAIL"
    occ = rep["final"]["occupations"]
    lines = [f"moves {rep['moves']}  phase {rep['phase']:+d}  pure braid {rep['pure_braid']}",
             "final configuration: " + (", ".join(f"{s}:{c}" for s, c in occ.items()) or "empty")]
    if "oracle" in rep:
        lines.append(f"loop oracle: {rep['oracle']}")
    lines.append("RESULT " + ("PASS" if rep["passed"] else "FAIL"))
    return "\n".join(lines)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--patch", metavar="ROWSxCOLS", help="patch shape in plaquettes")
    common.add_argument("--boundary", choices=("open", "periodic"), default="open")
    common.add_argument("--jx", type=float, default=1.0)
    common.add_argument("--jy", type=float, default=1.0)
    common.add_argument("--jz", type=float, default=1.0)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--out", metavar="FILE")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="rubycode", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    va = sub.add_parser("verify-algebra", parents=[common],
                        help="plaquette algebra, commutation with H, symplectic rank")
    va.add_argument("--patch-file", metavar="FILE", help="patch JSON instead of --patch")
    va.add_argument("--samples", type=int, default=200, help="random Pauli pairs to check")

    sp = sub.add_parser("spectrum", parents=[common],
                        help="microscopic and effective spectra of a small cluster")
    sp.add_argument("--triangles", type=int, help="chain cluster of N triangles instead of a patch")

    ga = sub.add_parser("gates", parents=[common], help="braided two-qubit gate tables")
    ga.add_argument("--scheme", default="all",
                    choices=("all", "hopping", "pair", "color_switch", "fusion"))
    ga.add_argument("--control-color", choices=("r", "g", "b"))
    ga.add_argument("--target-color", choices=("r", "g", "b"))
    ga.add_argument("--recipe")
    ga.add_argument("--oracle", action="store_true", help="use the microscopic loop oracle")

    br = sub.add_parser("braid", parents=[common], help="phase of a braid schedule")
    br.add_argument("--schedule", required=True, metavar="FILE")
    br.add_argument("--oracle", action="store_true", help="cross-check with the loop oracle")
    return p


def run(argv=None) -> tuple[int, dict | None]:
    args = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(args)
    if args.command == "verify-algebra":
        if args.patch_file:
            try:
                with open(args.patch_file, encoding="utf-8") as fh:
                    patch = LatticePatch.from_json(fh.read(), validate=False)
            except (OSError, ValueError, KeyError, TypeError) as exc:
                raise UsageError(f"cannot load patch file: {exc}") from None
        else:
            patch = cfg.patch()
        if args.samples < 0:
            raise UsageError("--samples must be non-negative")
        code, rep = cmd_verify_algebra(cfg, patch, args.samples)
        _emit(cfg, rep, _algebra_table(rep))
    elif args.command == "spectrum":
        if args.triangles is not None:
            if args.triangles < 1:
                raise UsageError("--triangles must be positive")
            try:
                patch = chain_cluster(args.triangles)
            except ValueError as exc:
                raise CapacityError(str(exc)) from None
        else:
            patch = cfg.patch()
        code, rep = cmd_spectrum(cfg, patch)
        _emit(cfg, rep, _spectrum_table(rep))
    elif args.command == "gates":
        code, rep = cmd_gates(cfg, args.scheme, args.control_color, args.target_color,
                              args.recipe, args.oracle)
        _emit(cfg, rep, _gates_table(rep))
    else:
        code, rep = cmd_braid(cfg, args.schedule, args.oracle)
        _emit(cfg, rep, _braid_table(rep))
    return code, rep


def main(argv=None) -> int:
    try:
        code, _ = run(argv)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"rubycode: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EncodingError as exc:
        print(f"rubycode: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"rubycode: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    return code


if __name__ == "__main__":
    sys.exit(main())

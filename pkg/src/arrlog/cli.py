"""Command-line front end and the regression corpus runner."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .arrangement import Arrangement, Hyperplane, ParseError, parse_arrangement
from .graphic import (crosscheck_graphic_t, graphic_arrangement, graphic_t, graphic_t_corrected,
                      max_clique, parse_graph, tri_count)
from .hypersolvable import (find_filtration, quadratic_poincare, restriction_identity,
                            supersolvable_exponents)
from .lattice import build_lattice, char_poly, integer_roots, poly_str
from .logder import (ConditionError, InvariantError, addition_generators, all_generators,
                     check_nonfree_criterion, degree_sequence, is_free, minimality_drops)
from .restriction import check_two_points, minimal_restriction

log = logging.getLogger("arrlog")

SCHEMA = 1
COMMANDS = ("lattice", "charpoly", "derivations", "freeness", "tnumber", "addition",
            "graph-analyze", "hyp-analyze", "corpus")
GRAPH_COMMANDS = ("graph-analyze",)

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    input_path: str
    max_degree: int | None = None
    output_format: str = "text"
    seed: int = 0
    emit_generators: bool = False
    budget: int = 10**6
    crosscheck: bool = False
    add: tuple[str, ...] = ()

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.max_degree is not None and self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")


def rat(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def _hyp_json(h: Hyperplane) -> list[str]:
    return [rat(c) for c in h.coeffs]


def _parse_form(text: str, dim: int) -> Hyperplane:
    try:
        vals = [Fraction(v) for v in text.replace(",", " ").split()]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad hyperplane {text!r}", 1) from None
    if len(vals) != dim or not any(vals):
        raise ParseError(f"hyperplane {text!r} needs {dim} coefficients, not all zero", 1)
    return Hyperplane(vals)


def _sequence(a: Arrangement, cfg: RunConfig):
    seq = degree_sequence(a, cfg.max_degree)
    if seq.truncated:
        print(f"warning: degree sequence truncated at degree {seq.cap} (generation bound {seq.bound})",
              file=sys.stderr)
    return seq


def _seq_json(seq, emit: bool) -> dict:
    out = {
        "degrees": list(seq.full_degrees()),
        "essential_degrees": list(seq.degrees),
        "d_max": seq.d_max,
        "truncated": seq.truncated,
        "searched_up_to": min(seq.cap, seq.bound),
        "graded_dims": {str(k): v for k, v in sorted(seq.graded_dims.items())},
    }
    if emit:
        out["generators"] = [g.to_json() | {"text": g.to_str()} for g in all_generators(seq)]
    return out


# one function per command, each returning a JSON-ready dict

def cmd_lattice(a: Arrangement, cfg: RunConfig) -> dict:
    lat = build_lattice(a)
    return {
        "rank": lat.rank,
        "flat_counts": [len(level) for level in lat.by_codim],
        "flats": lat.to_json()["flats"],
    }


def cmd_charpoly(a: Arrangement, cfg: RunConfig) -> dict:
    chi = char_poly(a)
    roots = integer_roots(chi)
    return {"coefficients": chi, "polynomial": poly_str(chi), "integer_roots": roots}


def cmd_derivations(a: Arrangement, cfg: RunConfig) -> dict:
    seq = _sequence(a, cfg)
    out = _seq_json(seq, cfg.emit_generators)
    if cfg.crosscheck and not seq.truncated:
        out["minimality"] = [
            {"degree": d, "dim": full, "without": rest} for d, full, rest in minimality_drops(a, seq)
        ]
        if any(rest >= full for _, full, rest in minimality_drops(a, seq)):
            raise InvariantError("a reported generator is redundant")
    return out


def cmd_freeness(a: Arrangement, cfg: RunConfig) -> dict:
    seq = _sequence(a, cfg)
    zeros = len(seq.center)
    target = a if a.is_essential() else _reduced(a)
    res = is_free(target, None if zeros else seq)
    out = {
        "free": res.free,
        "exponents": None if res.exponents is None else [0] * zeros + list(res.exponents),
        "reason": res.reason,
        "degrees": list(seq.full_degrees()),
    }
    if res.free:
        chi = char_poly(a)
        roots = integer_roots(chi)
        out["char_poly_roots"] = roots
        out["terao_factorization"] = roots == sorted(out["exponents"])
        if not out["terao_factorization"]:
            raise InvariantError("free arrangement whose characteristic polynomial does not factor by exponents")
        out["saito_scalar"] = rat(res.scalar)
    if cfg.add:
        # deletion criterion: is A' = this arrangement non-free, judged from A' + H
        h = _parse_form(cfg.add[0], a.ambient_dim)
        if h in a:
            raise ValueError(f"{h} already belongs to the arrangement")
        v = check_nonfree_criterion(a.add(h), h)
        out["deletion_criterion"] = v.verdict
        if v.verdict == "not_free" and res.free:
            raise InvariantError("deletion criterion contradicts the Saito certificate")
    return out


def _reduced(a: Arrangement) -> Arrangement:
    from .arrangement import essentialize

    return essentialize(a).reduced


def cmd_tnumber(a: Arrangement, cfg: RunConfig) -> dict:
    if a.ambient_dim < 3:
        raise ValueError("tnumber needs ambient dimension >= 3")
    seq = _sequence(a, cfg)
    rep = minimal_restriction(a, seq)
    out = {
        "t": rep.t_value,
        "witness": _hyp_json(rep.witness),
        "r": rep.r_value,
        "size": len(a),
        "d_max": seq.d_max,
        "inequality_slack": rep.inequality_slack,
        "notes": rep.notes,
    }
    if rep.inequality_slack is not None and rep.inequality_slack < 0:
        raise InvariantError(f"t_A = {rep.t_value} < |A| - d_A")
    if a.ambient_dim == 3:
        two = check_two_points(a, seq)
        out["two_points"] = {"hypothesis": two.hypothesis, "consistent": two.consistent}
        if not two.consistent:
            raise InvariantError("; ".join(two.notes))
    if cfg.crosscheck:
        out["sampled_min"] = _sampled_min(a, cfg.seed, 1000)
        if out["sampled_min"] < rep.t_value:
            raise InvariantError("random hyperplane beats the candidate minimum")
    return out


def _sampled_min(a: Arrangement, seed: int, count: int) -> int:
    """Smallest restriction over random hyperplanes.

    Samples are pencil members through a random codim-2 flat, the pencil
    member through one flat and a random point of another, or uniform forms.
    """
    from .exactmath import kernel_basis
    from .lattice import rank2_flats

    rng = random.Random(seed)
    ell = a.ambient_dim
    flats = rank2_flats(a)
    best = len(a)
    for _ in range(count):
        roll = rng.random()
        if flats and roll < 0.7:
            r1, r2 = rng.choice(flats).equations
            if roll < 0.35 and len(flats) > 1:
                ker = kernel_basis([list(r) for r in rng.choice(flats).equations], ell)
                p = [sum(rng.randint(-9, 9) * v[j] for v in ker) for j in range(ell)]
                c1 = sum(x * y for x, y in zip(r1, p))
                c2 = sum(x * y for x, y in zip(r2, p))
                form = [c2 * u - c1 * v for u, v in zip(r1, r2)]
            else:
                s1, s2 = rng.randint(-9, 9), rng.randint(-9, 9)
                form = [s1 * u + s2 * v for u, v in zip(r1, r2)]
        else:
            form = [rng.randint(-9, 9) for _ in range(ell)]
        if not any(form):
            continue
        h = Hyperplane(form)
        if h in a:
            continue
        best = min(best, a.restriction_size(h))
    return best


def cmd_addition(a: Arrangement, cfg: RunConfig) -> dict:
    if not cfg.add:
        raise ValueError("addition needs at least one --hyperplane")
    hs = [_parse_form(s, a.ambient_dim) for s in cfg.add]
    seq = _sequence(a, cfg)
    res = addition_generators(a, hs, seq, verify_up_to=None if cfg.max_degree is None else cfg.max_degree)
    out = {
        "d": res.d,
        "degrees": res.degrees,
        "verified_up_to": res.verified_up_to,
        "b_polys": [b.to_str() for b in res.b_polys],
        "pivot_rows": res.pivot_rows,
    }
    if cfg.emit_generators:
        out["generators"] = [g.to_json() | {"text": g.to_str()} for g in res.generators]
    return out


def cmd_graph(g, cfg: RunConfig) -> dict:
    rep = tri_count(g)
    out = {
        "vertices": g.num_vertices,
        "edges": len(g.edges),
        "tri": rep.tri,
        "tri_witness": list(rep.witness_edge) if rep.witness_edge else None,
        "has_4cycle": rep.has_4cycle,
        "t": graphic_t(g),
        "t_corrected": graphic_t_corrected(g),
        "max_clique": max_clique(g),
    }
    if cfg.crosscheck:
        cc = crosscheck_graphic_t(g)
        out["t_search"] = cc.search
        out["formula_agrees"] = cc.agree
        seq = _sequence(graphic_arrangement(g), cfg)
        out["derivations"] = _seq_json(seq, cfg.emit_generators)
        if rep.tri and not seq.truncated:
            out["tri_bound_slack"] = seq.d_max - rep.tri
            if seq.d_max < rep.tri:
                raise InvariantError(f"d = {seq.d_max} < Tri = {rep.tri}")
    return out


def cmd_hyp(a: Arrangement, cfg: RunConfig) -> dict:
    res = find_filtration(a, cfg.budget)
    out: dict = {"status": res.status, "nodes": res.nodes}
    direct = quadratic_poincare(a) if len(a) <= 12 else None
    out["qp_direct"] = direct
    if res.filtration is None:
        return out
    filt = res.filtration
    a_rows = [_hyp_json(h) for h in a]
    out["filtration"] = [[a_rows[i] for i in level] for level in filt.chain]
    out["steps"] = filt.steps
    out["hyperexponents"] = sorted(filt.steps)
    qp = quadratic_poincare(a, method="filtration", budget=cfg.budget)
    out["qp_filtration"] = qp
    if direct is not None and direct != qp:
        raise InvariantError("filtration and direct quadratic Poincare polynomials differ")
    for level, idx, restr, lower in restriction_identity(filt):
        if level > 0 and restr != lower:
            raise InvariantError(f"restriction identity fails at level {level}, hyperplane {idx}")
    out["supersolvable_exponents"] = supersolvable_exponents(a, cfg.budget)
    if cfg.crosscheck:
        from .hypersolvable import check_hypbound

        rep = check_hypbound(a, _sequence(a, cfg), cfg.budget)
        out["rho"] = rep.rho
        out["hypbound_slack"] = rep.slack
    return out


HANDLERS = {
    "lattice": cmd_lattice,
    "charpoly": cmd_charpoly,
    "derivations": cmd_derivations,
    "freeness": cmd_freeness,
    "tnumber": cmd_tnumber,
    "addition": cmd_addition,
    "graph-analyze": cmd_graph,
    "hyp-analyze": cmd_hyp,
}


def load_input(path: str, command: str):
    text = Path(path).read_text()
    if command in GRAPH_COMMANDS:
        return parse_graph(text)
    return parse_arrangement(text)


def report(cfg: RunConfig) -> dict:
    obj = load_input(cfg.input_path, cfg.command)
    body = HANDLERS[cfg.command](obj, cfg)
    return {"schema": SCHEMA, "command": cfg.command, "input": Path(cfg.input_path).name} | body


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1)


def render_text(obj: dict) -> str:
    lines = []
    for k, v in obj.items():
        if k == "schema":
            continue
        if isinstance(v, (list, dict)):
            v = json.dumps(v, sort_keys=True)
        lines.append(f"{k}: {v}")
    return "\n".join(lines)


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if cfg.command == "corpus":
        return run_corpus(cfg.input_path, cfg, out=out)
    try:
        obj = report(cfg)
    except ParseError as exc:
        print(f"{cfg.input_path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"cannot read {cfg.input_path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, ConditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"INVARIANT FAILURE: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    print(dumps(obj) if cfg.output_format == "json" else render_text(obj), file=out)
    return EXIT_OK


# corpus: <name>.arr or <name>.graph next to <name>.expected.json

class CorpusError(Exception):
    pass


def _load_expected(path: Path) -> list[dict]:
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"{path.name}: unreadable expected file ({exc})") from None
    if not isinstance(data, dict) or data.get("schema") != SCHEMA or not isinstance(data.get("checks"), list):
        raise CorpusError(f"{path.name}: expected {{'schema': 1, 'checks': [...]}}")
    for chk in data["checks"]:
        if not isinstance(chk, dict) or chk.get("command") not in HANDLERS or not isinstance(chk.get("expect"), dict):
            raise CorpusError(f"{path.name}: malformed check {chk!r}")
    return data["checks"]


def _case_config(inp: Path, chk: dict, base: RunConfig) -> RunConfig:
    opts = chk.get("options", {})
    return RunConfig(
        command=chk["command"], input_path=str(inp),
        max_degree=opts.get("max_degree", base.max_degree), output_format="json",
        seed=base.seed, emit_generators=False, budget=opts.get("budget", base.budget),
        crosscheck=opts.get("crosscheck", False), add=tuple(opts.get("add", ())),
    )


def _normalize(v):
    # JSON round trip so tuples and lists compare alike
    return json.loads(json.dumps(v))


def run_corpus(directory: str, base: RunConfig | None = None, out=None) -> int:
    out = out or sys.stdout
    base = base or RunConfig("corpus", directory)
    root = Path(directory)
    if not root.is_dir():
        print(f"corpus directory {directory} not found", file=sys.stderr)
        return EXIT_INPUT
    cases = sorted(p for p in root.iterdir() if p.suffix in (".arr", ".graph"))
    if not cases:
        log.warning("corpus %s is empty", directory)
        print("0 cases: nothing to check", file=out)
        return EXIT_OK
    rows = []
    worst = EXIT_OK
    for inp in cases:
        exp_path = inp.with_suffix(".expected.json")
        try:
            if not exp_path.exists():
                raise CorpusError(f"{inp.name}: missing {exp_path.name}")
            checks = _load_expected(exp_path)
        except CorpusError as exc:
            rows.append((inp.name, "-", "CORPUS-ERROR", str(exc)))
            worst = max(worst, EXIT_INPUT)
            continue
        for chk in checks:
            cfg = _case_config(inp, chk, base)
            try:
                got = report(cfg)
            except InvariantError as exc:
                rows.append((inp.name, cfg.command, "INVARIANT", str(exc)))
                worst = max(worst, EXIT_INVARIANT)
                continue
            except (ParseError, ValueError, OSError) as exc:
                rows.append((inp.name, cfg.command, "CORPUS-ERROR", str(exc)))
                worst = max(worst, EXIT_INPUT)
                continue
            bad = [k for k, v in chk["expect"].items() if _normalize(got.get(k)) != _normalize(v)]
            if bad:
                detail = "; ".join(f"{k}: expected {chk['expect'][k]!r}, got {got.get(k)!r}" for k in bad)
                rows.append((inp.name, cfg.command, "FAIL", detail))
                worst = max(worst, EXIT_INPUT)
            else:
                rows.append((inp.name, cfg.command, "pass", ""))
    w = max(len(r[0]) for r in rows)
    for name, cmd, status, detail in rows:
        print(f"{name:<{w}}  {cmd:<14} {status}{'  ' + detail if detail else ''}", file=out)
    passed = sum(1 for r in rows if r[2] == "pass")
    print(f"{passed}/{len(rows)} checks passed", file=out)
    return worst


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arrlog", description="Logarithmic derivations of hyperplane arrangements.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="arrangement/graph file, or corpus directory")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--json", action="store_true", help="JSON output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-generators", action="store_true")
    p.add_argument("--budget", type=int, default=10**6, help="node budget for the filtration search")
    p.add_argument("--crosscheck", action="store_true", help="enable brute-force oracles")
    p.add_argument("--hyperplane", action="append", default=[],
                   help="hyperplane to add (addition), e.g. '1,-1,0'; repeatable")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = RunConfig(args.command, args.input, args.max_degree, "json" if args.json else "text",
                        args.seed, args.emit_generators, args.budget, args.crosscheck, tuple(args.hyperplane))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

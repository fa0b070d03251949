"""Command-line front end: every subcommand prints a JSON report with a check list.

Exit status is 0 when every check passes, 1 when some check fails and 2 when
the input violates a precondition.
"""

from __future__ import annotations

import argparse
import ast
import json
import sys
from fractions import Fraction
from typing import Any

from . import linalg as la
from .cliffordks import CliffordAlgebra, eigenvalue_balance, kuga_satake_J, riemann_form
from .cores import embed_cores_in_clifford
from .errors import K3RMError
from .numfield import NumberField, field_discriminant, format_rational, is_totally_positive, parse_rational
from .quadform import QBilinearForm, det_square_class, signature, verify_isometry
from .rmhodge import (
    PeriodData,
    RMStructure,
    build_double_cover_example,
    construct_period,
    construct_rm_structure,
    det_identity_check,
    distinguished_embedding,
    embedding_signatures,
    is_polarization,
    simplicity_check,
    twist_det_check,
    twist_polarization,
)
from .spinbranch import spin_branching
from .zlattice import (
    IntegerLattice,
    discriminant_group_order,
    is_primitive_embedding,
    orthogonal_complement,
    smith_normal_form,
)
from . import fixtures


# reports ----------------------------------------------------------------------------

class Report:
    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = {k: v for k, v in inputs.items() if v is not None}
        self.results: dict = {}
        self.checks: list[dict] = []

    def check(self, name: str, ok: bool, witness: Any = None) -> bool:
        entry = {"name": name, "pass": bool(ok)}
        if not ok:
            entry["witness"] = witness if witness is not None else "no witness available"
        self.checks.append(entry)
        return ok

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_json(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "results": self.results,
                "checks": self.checks, "all_pass": self.ok}


def _q(x) -> str:
    return format_rational(x)


def _mat(M) -> list:
    return [[_elem(x) for x in row] for row in M]


def _elem(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    return _q(x)


# input parsing ------------------------------------------------------------------------

def parse_field(text: str | None) -> NumberField:
    """``"d=5"``/``"5"`` for ``Q(sqrt 5)``, a coefficient list ``"1,-3,0,1"`` (low degree first), or ``"Q"``."""
    if text is None or text.strip().upper() in ("Q", "1"):
        return NumberField.rationals()
    s = text.strip()
    if s.startswith("d="):
        s = s[2:]
    if s.startswith("["):
        coeffs = json.loads(s)
    else:
        coeffs = [c for c in s.split(",") if c.strip()]
    if len(coeffs) == 1:
        return NumberField.quadratic(int(coeffs[0]))
    return NumberField.from_poly([parse_rational(str(c)) for c in coeffs], attest_irreducible=True)


def parse_element(F: NumberField, text) -> Any:
    """Polynomial expression in ``a`` (the generator), e.g. ``1-a`` or ``3/2*a^2``; or a coefficient list."""
    if isinstance(text, list):
        return F([parse_rational(str(c)) for c in text])
    if isinstance(text, (int, Fraction)):
        return F(text)
    s = str(text).strip().replace("^", "**")
    if s.startswith("["):
        return F([parse_rational(str(c)) for c in json.loads(s)])
    tree = ast.parse(s, mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return F(node.value)
        if isinstance(node, ast.Name) and node.id in ("a", "alpha", "t", "s"):
            return F.gen
        if isinstance(node, ast.Name) and node.id.startswith("sqrt"):
            return F.gen
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
            if isinstance(node.op, ast.Pow) and right.is_rational:
                return left ** int(right.rational())
        raise ValueError(f"cannot parse element {text!r}")

    return ev(tree)


def parse_elements(F: NumberField, text) -> list:
    if isinstance(text, list):
        return [parse_element(F, x) for x in text]
    s = str(text).strip()
    if s.startswith("["):
        return [parse_element(F, x) for x in json.loads(s)]
    return [parse_element(F, x) for x in _split_top(s)]


def _split_top(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        out.append(cur)
    return out


def parse_matrix(text) -> list[list[Fraction]]:
    """``diag(1,-1)``, a fixture name, or a JSON nested list."""
    if isinstance(text, list):
        return [[parse_rational(str(x)) for x in row] for row in text]
    s = str(text).strip()
    if s.startswith("diag(") and s.endswith(")"):
        entries = [parse_rational(x) for x in s[5:-1].split(",")]
        return la.block_diag(*[[[e]] for e in entries])
    parts = [t.strip() for t in s.split("+")]
    if all(t in fixtures.NAMED for t in parts):
        return la.block_diag(*[[[Fraction(x) for x in row] for row in fixtures.named(t)] for t in parts])
    return [[parse_rational(str(x)) for x in row] for row in json.loads(s)]


def parse_vector(F: NumberField, text, d: int) -> list:
    """``e3`` (1-based standard vector) or a list of elements."""
    if isinstance(text, str) and text.strip().startswith("e") and text.strip()[1:].isdigit():
        k = int(text.strip()[1:]) - 1
        return [F.one if i == k else F.zero for i in range(d)]
    v = parse_elements(F, text)
    if len(v) != d:
        raise K3RMError(f"vector has length {len(v)}, expected {d}")
    return v


def pick_embedding(F: NumberField, index):
    if index is None:
        return F.embeddings()[-1]
    return F.embedding(int(index))


def load_structure(args) -> RMStructure:
    if getattr(args, "structure", None):
        with open(args.structure) as fh:
            return RMStructure.from_json(json.load(fh))
    F = parse_field(args.field)
    eps = pick_embedding(F, args.eps)
    a = parse_elements(F, args.a)
    return construct_rm_structure(F, int(args.m) if args.m else len(a), a, eps)


def _structure_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--structure", help="RMStructure JSON file")
    p.add_argument("--field", help="field: d for Q(sqrt d), or min-poly coefficients low degree first")
    p.add_argument("--m", type=int, help="rank over F")
    p.add_argument("--a", help="diagonal coefficients, e.g. '1-a,1-a,1'")
    p.add_argument("--eps", help="index of the designated real embedding (roots sorted ascending)")


# commands -------------------------------------------------------------------------------

def _structure_report(rep: Report, S: RMStructure) -> None:
    sig = signature(S.psi)
    rep.results["structure"] = S.to_json()
    rep.results["signature"] = list(sig)
    rep.results["det_class"] = det_square_class(S.psi)
    rep.results["field_discriminant_class"] = field_discriminant(S.field)
    rep.results["embeddings_approx"] = [e.approx() for e in S.field.embeddings()]
    rep.check("signature (d-2, 2)", sig == (S.d - 2, 2), list(sig))
    sigs = embedding_signatures(S)
    rep.results["eigenspace_signatures"] = [list(s) for s in sigs]
    special = [s for s in sigs if s == (S.m - 2, 2)]
    rest = [s for s in sigs if s != (S.m - 2, 2)]
    rep.check("one place with (m-2, 2), others (m, 0)",
              len(special) == 1 and all(s == (S.m, 0) for s in rest), [list(s) for s in sigs])
    det = det_identity_check(S)
    rep.results["det_identity"] = det
    rep.check("det psi = D_F^m N(det Phi) up to squares", det["ok"], det)


def cmd_construct_rm(args) -> Report:
    rep = Report("construct-rm", {"field": args.field, "m": args.m, "a": args.a, "eps": args.eps})
    S = load_structure(args)
    _structure_report(rep, S)
    return rep


def cmd_twist(args) -> Report:
    rep = Report("twist", {"structure": args.structure, "field": args.field, "m": args.m,
                           "a": args.a, "eps": args.eps, "by": args.by})
    S = load_structure(args)
    b = parse_element(S.field, args.by)
    tw = twist_polarization(S, b)
    rep.results["psi_a"] = tw.psi.to_json()
    rep.results["det_class_before"] = det_square_class(S.psi)
    rep.results["det_class_after"] = det_square_class(tw.psi)
    rep.results["norm_class"] = _norm_class(b)
    eps = distinguished_embedding(S)
    P = construct_period(S, eps)
    pol = is_polarization(tw.psi, S, P)
    rep.results["verdict"] = "polarization" if pol else "not-a-polarization"
    rep.results["totally_positive"] = tw.polarization
    rep.check("polarization iff totally positive", pol == is_totally_positive(b),
              {"is_polarization": pol, "totally_positive": tw.polarization})
    det = twist_det_check(S, b)
    rep.results["det_identity"] = det
    rep.check("det psi_a = N(a)^m det psi up to squares", det["ok"], det)
    return rep


def _norm_class(b) -> int:
    from .numfield import square_class

    return square_class(b.norm())


def cmd_invariants(args) -> Report:
    rep = Report("invariants", {"structure": args.structure, "psi": args.psi, "field": args.field,
                                "m": args.m, "a": args.a, "eps": args.eps})
    if args.psi and not args.structure and not args.a:
        psi = QBilinearForm(parse_matrix(args.psi))
        sig = signature(psi)
        rep.results["signature"] = list(sig)
        rep.results["det"] = _q(psi.det())
        rep.results["det_class"] = det_square_class(psi)
        rep.check("nondegenerate", psi.det() != 0, _q(psi.det()))
        return rep
    S = load_structure(args)
    _structure_report(rep, S)
    return rep


def cmd_period(args) -> Report:
    rep = Report("period", {"structure": args.structure, "field": args.field, "m": args.m,
                            "a": args.a, "eps": args.eps})
    S = load_structure(args)
    eps = distinguished_embedding(S) if args.eps is None else S.field.embedding(int(args.eps))
    P = construct_period(S, eps)
    rep.results["period"] = P.to_json()
    rep.results["K_degree"] = P.K.degree
    try:
        P.check(S.psi)
        rep.check("period invariants", True)
    except K3RMError as e:  # pragma: no cover - construct_period already checks
        rep.check("period invariants", False, str(e))
    rep.check("psi is a polarization for the period", is_polarization(S.psi, S, P))
    res = simplicity_check(S, P)
    rep.results["simplicity"] = res.to_json()
    return rep


def _period_from_args(args, psi: QBilinearForm) -> PeriodData:
    K = parse_field(args.field)
    emb = pick_embedding(K, args.eps)
    x = parse_vector(K, args.x, psi.dim)
    y = parse_vector(K, args.y, psi.dim)
    return PeriodData.make(psi, x, y, emb)


def cmd_simplicity(args) -> Report:
    rep = Report("simplicity", {"psi": args.psi, "field": args.field, "x": args.x, "y": args.y,
                                "eps": args.eps})
    psi = QBilinearForm(parse_matrix(args.psi))
    P = _period_from_args(args, psi)
    res = simplicity_check(psi, P)
    rep.results.update(res.to_json())
    rep.results["verdict"] = "Simple" if res.simple else "KernelBasis"
    return rep


def cmd_ks(args) -> Report:
    rep = Report("ks", {"psi": args.psi, "field": args.field, "x": args.x, "y": args.y,
                        "eps": args.eps, "seed1": args.seed1, "seed2": args.seed2})
    psi = QBilinearForm(parse_matrix(args.psi))
    P = _period_from_args(args, psi)
    A = CliffordAlgebra(psi)
    K = kuga_satake_J(A, P)
    rep.results["J"] = K.J.to_json()
    rep.results["dim_C_plus"] = A.even_dim
    J_ok = K.J * K.J == -1
    rep.results["J_check"] = J_ok
    rep.check("J^2 = -1", J_ok, (K.J * K.J).to_json())
    p, q = eigenvalue_balance(K)
    rep.results["eigenvalue_multiplicities"] = [p, q]
    seeds = (None, None)
    if args.seed1 and args.seed2:
        Q = NumberField.rationals()
        seeds = ([x.rational() for x in parse_vector(Q, args.seed1, psi.dim)],
                 [x.rational() for x in parse_vector(Q, args.seed2, psi.dim)])
    if A.d > 8:
        rep.results["E_valid"] = None
        return rep
    R = riemann_form(K, *seeds)
    rep.results["E_valid"] = True
    rep.results["E_sign"] = R.sign
    rep.results["signatures"] = {"E(.,J.)": [A.even_dim, 0]}
    for name, ok in R.checks.items():
        rep.check(f"E {name}", ok)
    return rep


def cmd_spin_branch(args) -> Report:
    rep = Report("spin-branch", {"m": args.m, "n": args.n})
    c = spin_branching(args.m, args.n)
    total, mult, base = c.dims
    rep.results.update(c.to_json())
    rep.results["identity"] = (f"S({args.n * args.m}) restricted to so({args.m})^{args.n} = "
                               f"{mult} x S({args.m})^{args.n}, dim {total} = {mult}*{base}")
    rep.check("branching multiset identity", c.ok, c.restricted.to_json())
    rep.check("dimension count", total == mult * base, [total, mult, base])
    return rep


def cmd_cores(args) -> Report:
    rep = Report("cores", {"field": args.field, "a": args.a or args.phi, "eps": args.eps})
    if args.phi and not args.a:
        args.a = args.phi
    S = load_structure(args)
    E = embed_cores_in_clifford(S)
    rep.results["cores_dim"] = E.cores.dim
    rep.results["clifford_even_dim"] = E.clifford.even_dim
    r = E.cores.Z.r
    rep.check("dim cores = (dim_F C+)^2", E.cores.dim == r * r, [E.cores.dim, r])
    for name, ok in E.checks.items():
        rep.check(name, ok)
    return rep


def _lattice(name_or_matrix) -> IntegerLattice:
    return IntegerLattice(parse_matrix(name_or_matrix))


def cmd_lattice(args) -> Report:
    rep = Report(f"lattice {args.action}", {"fixture": args.fixture, "matrix": args.matrix,
                                            "sub": args.sub, "B": args.B, "T": args.T})
    if args.action == "snf":
        M = parse_matrix(args.matrix or args.fixture)
        U, D, V = smith_normal_form(M)
        rep.results["U"] = U
        rep.results["D"] = D
        rep.results["V"] = V
        rep.results["invariant_factors"] = [D[i][i] for i in range(min(len(D), len(D[0])))]
        ok = [[int(x) for x in r] for r in la.matmul(la.matmul(U, M), V)] == D
        rep.check("U M V = D", ok, D)
    elif args.action == "complement":
        L = _lattice(args.fixture or args.matrix)
        S = parse_matrix(args.sub) if args.sub else []
        C = orthogonal_complement(L, S)
        rep.results["basis"] = C
        sub = IntegerLattice(L.sublattice_gram(C)) if C else None
        if sub is not None and sub.rank and sub.det() != 0:
            rep.results["signature"] = list(sub.signature())
        from .zlattice import is_primitive_sublattice

        rep.check("complement is primitive", is_primitive_sublattice(C))
    elif args.action == "embed-check":
        T = _lattice(args.T)
        L = _lattice(args.fixture or "LambdaK3")
        B = [[int(x) for x in r] for r in parse_matrix(args.B)]
        prim = is_primitive_embedding(B, T, L)
        rep.results["primitive"] = prim
        rep.check("Gram matches", True)
    if args.action in ("snf", "complement") and (args.fixture or args.matrix):
        try:
            L = _lattice(args.fixture or args.matrix)
            if L.det() != 0:
                rep.results["discriminant_group_order"] = discriminant_group_order(L)
        except (ValueError, K3RMError):
            pass
    return rep


def cmd_example_double_cover(args) -> Report:
    rep = Report("example-double-cover", {"d": args.d})
    S = build_double_cover_example(args.d)
    a = S.action(S.field.gen)
    rep.results["structure"] = S.to_json()
    a2 = la.matmul(a, a)
    rep.check("a^2 = d I", a2 == [[Fraction(args.d if i == j else 0) for j in range(6)] for i in range(6)],
              _mat(a2))
    G = S.psi.matrix()
    rep.check("a self-adjoint", la.matmul(la.transpose(a), G) == la.matmul(G, a))
    sigs = embedding_signatures(S)
    rep.results["eigenspace_signatures"] = {
        f"{e.approx():.6f} (approx)": list(s) for e, s in zip(S.field.embeddings(), sigs)}
    rep.check("eigenspace signatures (1,2) and (3,0)", sorted(sigs) == [(1, 2), (3, 0)], [list(s) for s in sigs])
    # psi is minus the cup product; compare -psi with <1>^2 + <-1>^4
    minus = QBilinearForm([[-x for x in row] for row in G])
    target = QBilinearForm.diagonal(1, 1, -1, -1, -1, -1)
    rep.results["signature_minus_psi"] = list(signature(minus))
    rep.results["det_class_minus_psi"] = det_square_class(minus)
    rep.check("-psi matches <1>^2 + <-1>^4 by signature and det class",
              signature(minus) == signature(target) and det_square_class(minus) == det_square_class(target))
    perm = _permutation_to(minus, target)
    rep.check("explicit isometry -psi -> <1>^2 + <-1>^4", perm is not None and verify_isometry(minus, target, perm))
    return rep


def _permutation_to(f, g):
    """Permutation matrix matching two diagonal forms, if one exists."""
    a = [f.gram[i][i] for i in range(f.dim)]
    b = [g.gram[i][i] for i in range(g.dim)]
    used = [False] * len(a)
    P = [[Fraction(0)] * len(b) for _ in a]
    for j, x in enumerate(b):
        i = next((i for i in range(len(a)) if not used[i] and a[i] == x), None)
        if i is None:
            return None
        used[i] = True
        P[i][j] = Fraction(1)
    return P


# parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3rm", description=__doc__)
    p.add_argument("--json", dest="json_file", help="read options from a JSON object file")
    p.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct-rm", help="build psi = tr(Phi) from diagonal Phi")
    _structure_args(c)
    c.set_defaults(func=cmd_construct_rm)

    c = sub.add_parser("twist", help="twist the polarization by a field element")
    _structure_args(c)
    c.add_argument("--by", required=True, help="twisting element, e.g. '2+a'")
    c.set_defaults(func=cmd_twist)

    c = sub.add_parser("invariants", help="signatures and determinant classes")
    _structure_args(c)
    c.add_argument("--psi", help="Gram matrix of a form over Q")
    c.set_defaults(func=cmd_invariants)

    c = sub.add_parser("period", help="construct a period in the distinguished eigenspace")
    _structure_args(c)
    c.set_defaults(func=cmd_period)

    for name, fn, text in (("simplicity", cmd_simplicity, "rational vectors orthogonal to a period"),
                           ("ks", cmd_ks, "Kuga-Satake complex structure and Riemann form")):
        c = sub.add_parser(name, help=text)
        c.add_argument("--psi", required=True)
        c.add_argument("--field", help="field K of the period coordinates (default Q)")
        c.add_argument("--eps", help="designated real embedding of K")
        c.add_argument("--x", required=True)
        c.add_argument("--y", required=True)
        if name == "ks":
            c.add_argument("--seed1", help="first Riemann-form seed vector (psi-negative plane)")
            c.add_argument("--seed2", help="second Riemann-form seed vector")
        c.set_defaults(func=fn)

    c = sub.add_parser("spin-branch", help="check the spin branching identity")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--n", type=int, required=True)
    c.set_defaults(func=cmd_spin_branch)

    c = sub.add_parser("cores", help="embed the corestriction of C+_F(Phi) into C+(psi)")
    _structure_args(c)
    c.add_argument("--phi", help="alias for --a")
    c.set_defaults(func=cmd_cores)

    c = sub.add_parser("lattice", help="integer lattice tools")
    c.add_argument("action", choices=["snf", "complement", "embed-check"])
    c.add_argument("--fixture")
    c.add_argument("--matrix")
    c.add_argument("--sub", help="sublattice basis rows (JSON)")
    c.add_argument("--B", help="embedding rows (JSON)")
    c.add_argument("--T", help="lattice being embedded (fixture or JSON)")
    c.set_defaults(func=cmd_lattice)

    c = sub.add_parser("example-double-cover", help="the double plane example with Q(sqrt d)")
    c.add_argument("--d", type=int, required=True)
    c.set_defaults(func=cmd_example_double_cover)
    return p


def _apply_json(args: argparse.Namespace) -> None:
    if not args.json_file:
        return
    with open(args.json_file) as fh:
        data = json.load(fh)
    for k, v in data.items():
        key = k.replace("-", "_")
        if isinstance(v, (list, dict)):
            v = json.dumps(v)
        setattr(args, key, v)


def _pretty(report: dict, out) -> None:
    print(f"{report['command']}", file=out)
    for k, v in report["inputs"].items():
        print(f"  input  {k:<24} {v}", file=out)
    for k, v in report["results"].items():
        text = json.dumps(v) if not isinstance(v, str) else v
        if len(text) > 100:
            text = text[:97] + "..."
        print(f"  result {k:<24} {text}", file=out)
    for c in report["checks"]:
        mark = "PASS" if c["pass"] else "FAIL"
        print(f"  [{mark}] {c['name']}", file=out)
        if not c["pass"]:
            print(f"         witness: {json.dumps(c.get('witness'))[:200]}", file=out)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_json(args)
    out = sys.stdout
    try:
        report = args.func(args).to_json()
    except (K3RMError, ValueError, OSError) as e:
        err = {"command": args.command, "error": type(e).__name__, "message": str(e)}
        for attr in ("k", "embedding"):
            if hasattr(e, attr):
                err[attr] = getattr(e, attr)
        print(json.dumps(err, indent=None if not args.pretty else 2), file=out)
        return 2
    if args.pretty:
        _pretty(report, out)
    else:
        print(json.dumps(report, default=str), file=out)
    return 0 if report["all_pass"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Generalized-torsion certificates.

A certificate is a small derivation DAG over products of conjugates of
one base element.  Steps are

* ``Base(c)``: the conjugate ``base^c``,
* ``Product(i, j)``: step i times step j,
* ``Conj(i, by)``: step i conjugated by ``by``,

and any step may carry ``equals``, a claimed shorter form of its value in
the group.  Verification re-derives each claimed step from the claimed
forms of its inputs, so a chain of hand calculations is checked link by
link, and the final step must be the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .presentations import Presentation, abelianization, presentation_from_json, presentation_to_json
from .word_problem import Budget, TriState, get_oracle, relator_insertion_proof, replay_insertion_proof
from .words import IDENTITY, Word, commutator, concat, conjugate, cyclic_permutations, invert, parse_word

__all__ = [
    "Base",
    "Product",
    "Conj",
    "TorsionCertificate",
    "CertificateError",
    "PreconditionError",
    "Verification",
    "step_words",
    "flatten",
    "flattened_product",
    "verify",
    "expand_commutator",
    "commuting_powers_certificate",
    "builtin_certificates",
    "transport",
    "certificate_to_json",
    "certificate_from_json",
]


class CertificateError(ValueError):
    """Malformed certificate or schema violation."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Base:
    conjugator: Word = IDENTITY
    equals: Word | None = None


@dataclass(frozen=True)
class Product:
    i: int
    j: int
    equals: Word | None = None


@dataclass(frozen=True)
class Conj:
    i: int
    by: Word
    equals: Word | None = None


Step = Base | Product | Conj


@dataclass(frozen=True)
class TorsionCertificate:
    presentation: Presentation
    base: Word
    steps: tuple[Step, ...]
    final: int
    name: str | None = None

    def check_structure(self):
        if not self.steps:
            raise CertificateError("certificate has no steps")
        for idx, step in enumerate(self.steps):
            refs = ()
            if isinstance(step, Product):
                refs = (step.i, step.j)
            elif isinstance(step, Conj):
                refs = (step.i,)
            elif not isinstance(step, Base):
                raise CertificateError(f"step {idx}: unknown step type {type(step).__name__}")
            for r in refs:
                if not isinstance(r, int) or not 0 <= r < idx:
                    raise CertificateError(f"step {idx} refers to step {r}, which is not an earlier step")
        if not 0 <= self.final < len(self.steps):
            raise CertificateError(f"final step {self.final} out of range")


def _apply(step: Step, values: list[Word], base: Word) -> Word:
    if isinstance(step, Base):
        return conjugate(base, step.conjugator)
    if isinstance(step, Product):
        return concat(values[step.i], values[step.j])
    return conjugate(values[step.i], step.by)


def step_words(cert: TorsionCertificate, claimed: bool = False) -> list[Word]:
    """Value of every step in the free group.

    With ``claimed`` the claimed forms replace computed values, which is the
    chain the verifier walks.
    """
    cert.check_structure()
    values: list[Word] = []
    for step in cert.steps:
        w = _apply(step, values, cert.base)
        if claimed and step.equals is not None:
            w = step.equals
        values.append(w)
    return values


def flatten(cert: TorsionCertificate, step: int | None = None) -> list[Word]:
    """Conjugators ``y_1..y_k`` with step value = base^y_1 ... base^y_k freely."""
    cert.check_structure()
    lists: list[list[Word]] = []
    for s in cert.steps:
        if isinstance(s, Base):
            lists.append([s.conjugator])
        elif isinstance(s, Product):
            lists.append(lists[s.i] + lists[s.j])
        else:
            # (base^c)^by = base^(c by)
            lists.append([concat(c, s.by) for c in lists[s.i]])
    return lists[cert.final if step is None else step]


def flattened_product(base: Word, conjugators: list[Word]) -> Word:
    out = IDENTITY
    for c in conjugators:
        out = concat(out, conjugate(base, c))
    return out


@dataclass
class Verification:
    status: str  # "verified" | "inconclusive" | "refuted"
    certificate: TorsionCertificate
    reason: str = ""
    conjugators: list[Word] = field(default_factory=list)
    transcript: list[dict] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    @property
    def k(self) -> int:
        return len(self.conjugators)

    def to_json(self) -> dict:
        P = self.certificate.presentation
        return {
            "status": self.status,
            "reason": self.reason,
            "k": self.k,
            "conjugators": [P.render(c) for c in self.conjugators],
            "transcript": self.transcript,
        }


def _outcome(result: TriState, want_trivial: bool) -> str:
    if result.unknown:
        return "inconclusive"
    return "ok" if result.trivial == want_trivial else "refuted"


def _insertion_chain(P, w, max_nodes):
    if not max_nodes:
        return None
    proof = relator_insertion_proof(P, w, max_depth=4, max_nodes=max_nodes)
    if proof is not None and replay_insertion_proof(P, w, proof):
        return proof
    return None


def verify(
    cert: TorsionCertificate,
    budget: Budget | None = None,
    insertion_nodes: int = 300,
) -> Verification:
    """Check ``cert``: base nontrivial, every claimed step, final step trivial.

    Each claimed step that needs the relators also records, when a short one
    exists, an explicit chain of relator insertions (``insertion_nodes``
    bounds that extra search; 0 disables it).
    """
    cert.check_structure()
    P = cert.presentation
    oracle = get_oracle(P, budget)
    transcript: list[dict] = []
    conjugators = flatten(cert)

    def done(status, reason):
        return Verification(status, cert, reason, conjugators, transcript)

    base_check = oracle.is_trivial(cert.base)
    transcript.append({"check": "base is nontrivial", "word": P.render(cert.base), "result": base_check.describe()})
    outcome = _outcome(base_check, want_trivial=False)
    if outcome != "ok":
        return done(outcome, "base element is trivial" if outcome == "refuted" else "could not decide the base")

    # free-group consistency between the step structure and its flattening
    exact = step_words(cert)
    if flattened_product(cert.base, conjugators) != exact[cert.final]:
        return done("refuted", "flattening does not match the step structure")

    claimed: list[Word] = []
    for idx, step in enumerate(cert.steps):
        w = _apply(step, claimed, cert.base)
        if step.equals is not None:
            result = oracle.equal(w, step.equals)
            entry = {
                "check": f"step {idx}",
                "computed": P.render(w),
                "claimed": P.render(step.equals),
                "result": result.describe(),
            }
            outcome = _outcome(result, want_trivial=True)
            if outcome != "ok":
                transcript.append(entry)
                return done(outcome, f"step {idx}: claimed form not established")
            if step.equals != w:
                proof = _insertion_chain(P, concat(w, invert(step.equals)), insertion_nodes)
                if proof is not None:
                    entry["relator_insertions"] = [[pos, P.render(ins)] for pos, ins in proof]
            transcript.append(entry)
            w = step.equals
        claimed.append(w)

    final = claimed[cert.final]
    if final:
        result = oracle.is_trivial(final)
        transcript.append({"check": "final is trivial", "word": P.render(final), "result": result.describe()})
        outcome = _outcome(result, want_trivial=True)
        if outcome != "ok":
            return done(outcome, "final product not shown trivial")
    else:
        transcript.append({"check": "final is trivial", "word": "", "result": "trivial (claimed chain)"})
    return done("verified", "")


# -- commutator expansion -----------------------------------------------------------


def expand_commutator(p: int, q: int) -> list[Word]:
    """Conjugators c_i with [x,y]^c_1 ... [x,y]^c_m = [x^p, y^q] in the free group.

    From [x^n, y] = [x^(n-1), y]^x [x, y] and [X, y^n] = [X, y] [X, y^(n-1)]^y.
    x is generator 0 and y generator 1.
    """
    if p < 1 or q < 1:
        raise ValueError("expand_commutator needs positive exponents")
    x, y = Word.gen(0), Word.gen(1)
    row = [IDENTITY]
    for _ in range(p - 1):
        row = [concat(c, x) for c in row] + [IDENTITY]
    out = list(row)
    for _ in range(q - 1):
        out = row + [concat(c, y) for c in out]
    return out


def _chain(conjugators: list[Word], final_equals: Word | None) -> tuple[list[Step], int]:
    steps: list[Step] = [Base(c) for c in conjugators]
    acc = 0
    for i in range(1, len(conjugators)):
        steps.append(Product(acc, i))
        acc = len(steps) - 1
    if final_equals is not None:
        last = steps[acc]
        steps[acc] = replace(last, equals=final_equals)
    return steps, acc


def commuting_powers_certificate(
    P: Presentation,
    x: Word,
    y: Word,
    p: int,
    q: int,
    budget: Budget | None = None,
) -> TorsionCertificate:
    """Certificate that [x, y] is generalized torsion when x^p and y^q commute."""
    oracle = get_oracle(P, budget)
    powers = oracle.is_trivial(commutator(x ** p, y ** q))
    base = commutator(x, y)
    base_check = oracle.is_trivial(base)
    if powers.unknown or base_check.unknown:
        raise PreconditionError("inconclusive: oracle could not decide the preconditions")
    if not powers.trivial:
        raise PreconditionError("x^p and y^q do not commute")
    if not base_check.nontrivial:
        raise PreconditionError("[x, y] is trivial")
    conjugators = [c.substitute([x, y]) for c in expand_commutator(p, q)]
    steps, final = _chain(conjugators, IDENTITY)
    return TorsionCertificate(P, base, tuple(steps), final, name=f"commuting powers p={p}, q={q}")


# -- the certificates worked out by hand ----------------------------------------------


def _klein() -> TorsionCertificate:
    from .presentations import catalog

    P = catalog("klein")
    w = P.word
    steps = (Base(w("y")), Base(IDENTITY), Product(0, 1, equals=IDENTITY))
    return TorsionCertificate(P, w("x"), steps, 2, name="klein")


def _trefoil() -> TorsionCertificate:
    from .presentations import catalog

    P = catalog("3_1")
    w = P.word
    steps = (Base(w("x")), Base(IDENTITY), Product(0, 1, equals=IDENTITY))
    return TorsionCertificate(P, commutator(w("x"), w("y")), steps, 2, name="trefoil")


def _fivetwo_first() -> TorsionCertificate:
    from .presentations import catalog

    P = catalog("5_2")
    w = P.word
    steps = (
        Base(IDENTITY),  # (1) AbaB
        Conj(0, w("bb"), equals=w("BBAbab")),  # (2)
        Conj(0, w("B"), equals=w("bAbaBB")),  # (3)
        Product(0, 2, equals=w("aBBAb")),  # (4) AbbaBB = aBBAb
        Conj(3, w("bbAb"), equals=w("BAbba")),  # (5)
        Conj(3, w("B"), equals=w("baBBA")),  # (6)
        Conj(0, w("AB"), equals=w("bbaBAB")),  # (7)
        Product(6, 5, equals=w("bbaBBBA")),  # (8)
        Product(1, 4, equals=w("BBAbbba")),  # (9)
        Conj(8, w("AAAA")),
        Product(9, 7, equals=IDENTITY),
    )
    return TorsionCertificate(P, w("AbaB"), steps, 10, name="fivetwo_first")


def _fivetwo_second() -> TorsionCertificate:
    from .presentations import catalog

    P = catalog("5_2")
    w = P.word
    c = commutator(w("a"), w("B"))
    steps = (
        Base(w("A")),  # c^(a^-1)
        Base(IDENTITY),  # c
        Base(w("B")),  # c^(b^-1)
        Product(0, 1),
        Product(3, 2, equals=w("baBBBAb")),
        Conj(4, w("Baa"), equals=w("BB")),  # first product is b^-2
        Base(w("bb")),
        Base(w("b")),
        Product(6, 7, equals=w("BBAbba")),  # [b^2, a]
        Conj(8, w("Ab")),
        Product(6, 9, equals=w("BBAbbba")),
        Conj(10, w("AA"), equals=w("bb")),  # second product is b^2
        Product(5, 11, equals=IDENTITY),
    )
    return TorsionCertificate(P, c, steps, 12, name="fivetwo_second")


def builtin_certificates() -> dict[str, TorsionCertificate]:
    return {
        "klein": _klein(),
        "trefoil": _trefoil(),
        "fivetwo_first": _fivetwo_first(),
        "fivetwo_second": _fivetwo_second(),
    }


# -- transport through an inclusion -------------------------------------------------


def _relator_forms(P: Presentation) -> set[Word]:
    out = set()
    for r in P.relators:
        out.update(cyclic_permutations(r))
        out.update(cyclic_permutations(invert(r)))
    return out


def transport(cert: TorsionCertificate, inclusion, target: Presentation) -> TorsionCertificate:
    """Rename every word of ``cert`` along ``inclusion`` into ``target``.

    ``inclusion`` sends source generator i to target generator
    ``inclusion[i]``; it must be injective and carry each source relator to
    a relator of the target (up to rotation and inversion).
    """
    source = cert.presentation
    mapping = list(inclusion)
    if len(mapping) != source.rank or len(set(mapping)) != len(mapping):
        raise CertificateError("inclusion must be an injective map on generators")
    if any(not 0 <= g < target.rank for g in mapping):
        raise CertificateError("inclusion points outside the target alphabet")
    forms = _relator_forms(target)
    for r in source.relators:
        if r.rename(mapping) not in forms:
            raise CertificateError(f"relator {source.render(r)} is not sent to a relator of the target")

    def ren(w: Word | None) -> Word | None:
        return None if w is None else w.rename(mapping)

    steps = []
    for s in cert.steps:
        if isinstance(s, Base):
            steps.append(Base(ren(s.conjugator), ren(s.equals)))
        elif isinstance(s, Product):
            steps.append(Product(s.i, s.j, ren(s.equals)))
        else:
            steps.append(Conj(s.i, ren(s.by), ren(s.equals)))
    name = f"{cert.name} in {target.name}" if cert.name else None
    return TorsionCertificate(target, ren(cert.base), tuple(steps), cert.final, name=name)


# -- JSON ---------------------------------------------------------------------------


def certificate_to_json(cert: TorsionCertificate) -> dict:
    P = cert.presentation
    steps = []
    for s in cert.steps:
        if isinstance(s, Base):
            d = {"op": "base", "conj": P.render(s.conjugator)}
        elif isinstance(s, Product):
            d = {"op": "mul", "args": [s.i, s.j]}
        else:
            d = {"op": "conj", "args": [s.i], "by": P.render(s.by)}
        if s.equals is not None:
            d["equals"] = P.render(s.equals)
        steps.append(d)
    out = {
        "presentation": presentation_to_json(P),
        "base": P.render(cert.base),
        "steps": steps,
        "final": cert.final,
    }
    if cert.name:
        out["name"] = cert.name
    return out


def certificate_from_json(data: dict) -> TorsionCertificate:
    if not isinstance(data, dict):
        raise CertificateError("certificate must be a JSON object")
    for key in ("presentation", "base", "steps", "final"):
        if key not in data:
            raise CertificateError(f"missing key {key!r}")
    try:
        P = presentation_from_json(data["presentation"])
        names = P.generators

        def word(text):
            if not isinstance(text, str):
                raise CertificateError(f"expected a word string, got {text!r}")
            return parse_word(text, names)

        steps: list[Step] = []
        for idx, d in enumerate(data["steps"]):
            if not isinstance(d, dict) or "op" not in d:
                raise CertificateError(f"step {idx} must be an object with an 'op'")
            equals = word(d["equals"]) if "equals" in d else None
            op = d["op"]
            if op == "base":
                steps.append(Base(word(d.get("conj", "")), equals))
            elif op == "mul":
                i, j = d["args"]
                steps.append(Product(int(i), int(j), equals))
            elif op == "conj":
                (i,) = d["args"]
                steps.append(Conj(int(i), word(d["by"]), equals))
            else:
                raise CertificateError(f"step {idx}: unknown op {op!r}")
        final = data["final"]
        if not isinstance(final, int):
            raise CertificateError("final must be an integer step index")
        cert = TorsionCertificate(P, word(data["base"]), tuple(steps), final, name=data.get("name"))
    except CertificateError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"invalid certificate: {exc}") from exc
    cert.check_structure()
    return cert


def dumps(cert: TorsionCertificate) -> str:
    return json.dumps(certificate_to_json(cert), indent=2, sort_keys=True) + "\n"


def base_weight_is_zero(cert: TorsionCertificate) -> bool:
    """Verified certificates have bases killed by the map onto Z."""
    ab = abelianization(cert.presentation)
    return ab.weights is None or ab.image(cert.base) == 0

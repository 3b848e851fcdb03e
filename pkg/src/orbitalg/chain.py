"""Chain complexes, homology and quasi-isomorphism detection.

Everything is truncated: a complex carries max_degree, and any homology
group whose computation would need boundaries from above the truncation is
reported as Undetermined instead of guessed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graded import Element, FreeGradedModule, GradedMap, dual_module, dualize
from .sparse import (SparseMatrix, columns_matrix, kernel_basis, rank, solve,
                     smith_normal_form)


@dataclass
class Report:
    """Outcome of a structure check; failure is data, not an exception."""

    passed: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed

    @staticmethod
    def ok():
        return Report(True)

    @staticmethod
    def fail(witnesses):
        return Report(False, list(witnesses))

    def merge(self, other):
        return Report(self.passed and other.passed, self.failures + other.failures)


UNDETERMINED = "undetermined"


class ChainComplex:
    """Free graded module with a square-zero differential.

    d_degree is -1 for chain complexes and +1 for cochain (dualized) ones.
    """

    def __init__(self, module, d, max_degree, d_degree=-1, check=True):
        if d.degree != d_degree:
            raise ValueError("differential has degree %d, expected %d"
                             % (d.degree, d_degree))
        self.module = module
        self.d = d
        self.max_degree = max_degree
        self.d_degree = d_degree
        if check:
            rep = self.verify_differential()
            if not rep:
                raise ValueError("d^2 != 0 at %s" % (rep.failures[:3],))

    @property
    def ring(self):
        return self.module.ring

    def verify_differential(self):
        """Check d o d = 0 on every generator within the truncation."""
        bad = []
        for n in self.module.degrees():
            if n > self.max_degree:
                continue
            for g in self.module.basis_in(n):
                if not self.d(self.d(self.module.gen(g))).is_zero():
                    bad.append(g)
        return Report(not bad, bad)

    def boundary_matrix(self, n):
        """Matrix of d restricted to degree n."""
        return self.d.matrix(n)

    def homology(self, degrees, want_reps=False):
        """Homology per degree; see HomologyResult.

        Over Z: rank + invariant factors from Smith normal form.  Over a
        field: dimensions.  Degrees whose incoming boundaries live above
        max_degree come back Undetermined.
        """
        out = HomologyResult(self.ring)
        for n in degrees:
            out.groups[n] = self._homology_at(n, want_reps)
        return out

    def _homology_at(self, n, want_reps):
        R = self.ring
        into = n - self.d_degree   # degree whose boundaries land in degree n
        # both the incoming boundaries and the outgoing differential must be
        # inside the truncation, otherwise kernel or image data is missing
        if max(n, into, n + self.d_degree) > self.max_degree:
            return UNDETERMINED
        A = self.d.matrix(n)                    # leaving degree n
        B = self.d.matrix(into)                 # arriving into degree n
        dim = self.module.dim(n)
        ker = kernel_basis(A) if dim else []
        if R.is_field:
            betti = len(ker) - rank(B) if dim else 0
            reps = None
            if want_reps:
                reps = self._field_reps(n, ker, B)
                betti = len(reps)
            return HomologyGroup(n, betti, [], reps)
        # integral case: express the image inside the kernel lattice
        if not ker:
            return HomologyGroup(n, 0, [], [] if want_reps else None)
        K = columns_matrix(R, ker, dim)
        img_cols = []
        for j in range(B.cols):
            col = [B.get(i, j) for i in range(B.rows)]
            if any(not R.is_zero(c) for c in col):
                x = solve(K, col)
                if x is None:
                    raise RuntimeError("image not contained in kernel; d^2 != 0?")
                img_cols.append(x)
        if img_cols:
            X = columns_matrix(R, img_cols, len(ker))
            invariants, U, _ = smith_normal_form(X)
        else:
            invariants, U = [], SparseMatrix.identity(R, len(ker))
        betti = len(ker) - len(invariants)
        torsion = [d for d in invariants if d != 1]
        reps = None
        if want_reps:
            # rows of U^{-1}... we only need free representatives: the last
            # betti columns of K * U^{-1}; over Z we skip reps (ring
            # presentations are field-only by design)
            reps = []
        return HomologyGroup(n, betti, torsion, reps)

    def _field_reps(self, n, ker, B):
        """Deterministic representatives of a basis of ker/im over a field."""
        R = self.ring
        dim = self.module.dim(n)
        img_cols = []
        for j in range(B.cols):
            col = [B.get(i, j) for i in range(B.rows)]
            if any(not R.is_zero(c) for c in col):
                img_cols.append(col)
        chosen = []
        cur = img_cols[:]
        r = rank(columns_matrix(R, cur, dim)) if cur else 0
        for v in ker:
            r2 = rank(columns_matrix(R, cur + [v], dim))
            if r2 > r:
                chosen.append(self.module.from_vector(n, v))
                cur.append(v)
                r = r2
        return chosen

    def class_vector(self, el, reps):
        """Coordinates of a cycle's homology class in the chosen basis.

        reps are the representatives for el.degree; returns None when el is
        not a cycle.  Field coefficients only.
        """
        R = self.ring
        n = el.degree
        if not self.d(el).is_zero():
            return None
        B = self.d.matrix(n - self.d_degree)
        dim = self.module.dim(n)
        cols = []
        for j in range(B.cols):
            cols.append([B.get(i, j) for i in range(B.rows)])
        for rep in reps:
            cols.append(rep.to_vector())
        M = columns_matrix(R, cols, dim)
        x = solve(M, el.to_vector())
        if x is None:
            raise RuntimeError("cycle not in span of boundaries and representatives")
        return x[B.cols:]

    def dualize(self):
        """The dual cochain complex (finite type on the stored range)."""
        dmod = dual_module(self.module)
        dd = dualize(self.d, dual_source=dmod, dual_target=dmod)
        return ChainComplex(dmod, dd, self.max_degree, d_degree=-self.d_degree)


@dataclass
class HomologyGroup:
    degree: int
    betti: int
    torsion: list            # invariant factors > 1, divisibility chain
    representatives: object = None

    def describe(self, ring):
        if ring.kind == "Z":
            parts = ["Z"] * self.betti + ["Z/%d" % t for t in self.torsion]
            return " + ".join(parts) if parts else "0"
        if self.betti == 0:
            return "0"
        return "%s^%d" % (ring.name(), self.betti)


@dataclass
class HomologyResult:
    ring: object
    groups: dict = field(default_factory=dict)

    def betti(self, n):
        g = self.groups.get(n)
        if g is None or g == UNDETERMINED:
            return None
        return g.betti

    def torsion(self, n):
        g = self.groups.get(n)
        if g is None or g == UNDETERMINED:
            return None
        return g.torsion

    def is_trivial_except_degree_zero(self):
        for n, g in self.groups.items():
            if g == UNDETERMINED:
                continue
            if n == 0:
                if g.betti != 1 or g.torsion:
                    return False
            elif g.betti != 0 or g.torsion:
                return False
        return True

    def describe(self):
        lines = []
        for n in sorted(self.groups):
            g = self.groups[n]
            if g == UNDETERMINED:
                lines.append("H%d = undetermined (truncation)" % n)
            else:
                lines.append("H%d = %s" % (n, g.describe(self.ring)))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Chain maps and mapping cones
# ---------------------------------------------------------------------------

def is_chain_map(f, C, D):
    """Does f commute with the differentials?  Returns a Report."""
    bad = []
    for n in C.module.degrees():
        if n > C.max_degree:
            continue
        for g in C.module.basis_in(n):
            x = C.module.gen(g)
            lhs = f(C.d(x))
            rhs = D.d(f(x))
            if lhs != rhs:
                bad.append(g)
    return Report(not bad, bad)


def mapping_cone(f, C, D):
    """Cone(f) with Cone_n = C_{n-1} + D_n, d(x, y) = (-dx, dy - f(x))."""
    ring = C.ring
    basis = {}
    for n in C.module.degrees():
        basis.setdefault(n + 1, []).extend(("cone", 0, g) for g in C.module.basis_in(n))
    for n in D.module.degrees():
        basis.setdefault(n, []).extend(("cone", 1, g) for g in D.module.basis_in(n))
    mod = FreeGradedModule(ring, basis)

    def wrap(side, el, degree):
        return mod.element(degree, {("cone", side, g): c for g, c in el.terms.items()},
                           strict=False)

    d = GradedMap(mod, mod, -1)
    for n in C.module.degrees():
        for g in C.module.basis_in(n):
            x = C.module.gen(g)
            img = wrap(0, -C.d(x), n) + wrap(1, -f(x), n)
            d.set_image(("cone", 0, g), img)
    for n in D.module.degrees():
        for g in D.module.basis_in(n):
            d.set_image(("cone", 1, g), wrap(1, D.d(D.module.gen(g)), n - 1))
    return ChainComplex(mod, d, min(C.max_degree + 1, D.max_degree), check=False)


def is_quasi_iso(f, C, D, degree_range):
    """True iff the mapping cone of f is acyclic on the range.

    The range must sit strictly below the truncation so no group comes back
    Undetermined.
    """
    top = max(degree_range)
    if top + 1 > C.max_degree or top + 1 > D.max_degree:
        raise ValueError("range exceeds truncation: need degree %d data" % (top + 1,))
    rep = is_chain_map(f, C, D)
    if not rep:
        raise ValueError("not a chain map at %s" % (rep.failures[:3],))
    cone = mapping_cone(f, C, D)
    H = cone.homology(degree_range)
    for n in degree_range:
        g = H.groups[n]
        if g == UNDETERMINED:
            raise ValueError("cone homology undetermined at degree %d" % n)
        if g.betti != 0 or g.torsion:
            return False
    return True

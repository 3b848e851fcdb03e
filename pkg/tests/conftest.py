import os
import subprocess
import sys

import pytest

from orbitalg.chain import ChainComplex
from orbitalg.dg import DGAlgebra, DGCoalgebra
from orbitalg.graded import FreeGradedModule, GradedMap, tensor, tensor_elements
from orbitalg.rings import QQ, ZZ

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def sphere_coalgebra(ring=ZZ, max_degree=10):
    """Chains on the 2-sphere: a group-like point and a primitive degree-2
    class, zero differential."""
    mod = FreeGradedModule(ring, {0: ["b"], 2: ["s"]})
    cx = ChainComplex(mod, GradedMap(mod, mod, -1), max_degree)
    sq = tensor(mod, mod, max_degree)
    com = GradedMap(mod, sq, 0)
    b, s = mod.gen("b"), mod.gen("s")
    com.set_image("b", tensor_elements(ring, sq, [b, b]))
    com.set_image("s", tensor_elements(ring, sq, [s, b]) +
                  tensor_elements(ring, sq, [b, s]))
    return DGCoalgebra(cx, com, "b", name="sphere2")


def free_algebra(ring=ZZ, max_degree=10):
    """The free algebra on one degree-1 generator: basis x^k, zero d."""
    basis = {k: ["x%d" % k] for k in range(max_degree + 1)}
    mod = FreeGradedModule(ring, basis)
    cx = ChainComplex(mod, GradedMap(mod, mod, -1), max_degree)
    sq = tensor(mod, mod, max_degree)
    mult = GradedMap(sq, mod, 0)
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            src = tensor_elements(ring, sq, [mod.gen("x%d" % a),
                                             mod.gen("x%d" % b)])
            (g, c), = src.terms.items()
            mult.set_image(g, mod.gen("x%d" % (a + b)).scale(c))
    return DGAlgebra(cx, mult, "x0", name="free-x")


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("ORBITALG_MAX_DEGREE", None)
    if env:
        full_env.update(env)
    return subprocess.run([sys.executable, "-m", "orbitalg.cli", *args],
                          capture_output=True, text=True, env=full_env)

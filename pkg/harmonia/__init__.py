"""Exact verification of harmonic-number congruences modulo p^2."""

from .bernoulli import b_target, bernoulli_exact, bernoulli_mod_p
from .checks import CheckDescriptor, CheckResult, list_checks, run_all, run_check
from .harmonic import Composition, HarmonicProfile, compute_profile, mhs, naive_profile
from .oracle import ExactProfile, compare_profiles, exact_profile, reduce_profile
from .ring import Residue, ResidueRing, batch_inverses, inv, make_ring, mul, rational_residue

__all__ = [
    "b_target", "bernoulli_exact", "bernoulli_mod_p",
    "CheckDescriptor", "CheckResult", "list_checks", "run_all", "run_check",
    "Composition", "HarmonicProfile", "compute_profile", "mhs", "naive_profile",
    "ExactProfile", "compare_profiles", "exact_profile", "reduce_profile",
    "Residue", "ResidueRing", "batch_inverses", "inv", "make_ring", "mul", "rational_residue",
]

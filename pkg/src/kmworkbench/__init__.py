"""Exact workbench for Donaldson series written in basic-class form."""

from .errors import *  # noqa: F401,F403
from .lattice import IntersectionLattice, SurfaceDescriptor, signature
from .series import (HomogeneousPolynomial, KMStructure, TruncatedSeries, contract, evaluate,
                     expand_structure, gaussian_series, mul_truncated, normalize_C)
from .structure import (RawEntry, RawPolynomialFamily, SurfaceConstraint, check_simple_type,
                        export_raw, flatten_to_series, min_genus_bound, verify_km_properties)
from .cone import (RationalCone, decompose, enumerate_candidates, gentype_bound_check, is_nef,
                   is_salient, membership)
from .hodge import GaussianRational, HodgeBasis, forms_identity_check, purity_check, restrict_to_type
from .blowup import blowdown_E4, blowdown_E6, blowup_lattice, blowup_structure
from .recovery import prony, recover, recover_from_NS, recover_structure, separating_direction

__version__ = "0.1.0"

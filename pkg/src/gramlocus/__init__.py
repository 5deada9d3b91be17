"""Gram determinants of binary tensor flattenings.

Tools for the image of the unit sphere of real 2 x ... x 2 tensors under the
map to principal flattening Gram determinants: exact sum-of-squares
certificates for its facet inequalities, membership classification against
the curved boundary surface, higher-order singular values, the 2x2x2
hyperdeterminant with orthogonal-equivalence search, and reproducible
Monte Carlo experiments.
"""
from .flatten import (GramTuple, gram_det, gram_det_general, gram_det_minors,
                      gram_matrix, gram_tuple, principal_flattening,
                      subset_flattening)
from .hosvd import SingularPair, dets_from_sigma_max, singular_pairs
from .locus import (Membership, VolumeEstimate, branch_p, branch_q,
                    hull_margins, hull_membership, hull_vertices,
                    locus_membership_conjecture, locus_membership_n3,
                    pair_curves, q1, q2, q2_closed_form_n3, q_surface,
                    volume_fraction_linear)
from .sos import (CertificateError, SosCertificate, build_certificate,
                  build_target, certificate_from_json, certificate_term_count,
                  certificate_to_json, evaluate_certificate,
                  formula_term_count, reference_certificate_n3,
                  reference_certificate_n4, verify_certificate)
from .tensor import (BinaryTensor, GeneralTensor, OrthoTuple, edge_tensor,
                     example_223, example_counter, frobenius_norm, make_binary,
                     make_general, ortho_act, sample_ball, sample_unit,
                     sample_unit_batch, vertex_tensor)
from .tri_invariants import (EquivResult, InvariantVector, equiv_search,
                             hyperdet, invariant_vector)
from .experiments import (FuzzReport, SurfacePoint, boundary_examples_report,
                          fuzz, surface_grid, write_surface_csv)

__version__ = "0.1.0"

__all__ = [
    "BinaryTensor", "GeneralTensor", "OrthoTuple", "GramTuple",
    "SingularPair", "Membership", "VolumeEstimate", "SosCertificate",
    "CertificateError", "InvariantVector", "EquivResult", "FuzzReport",
    "SurfacePoint",
    "make_binary", "make_general", "frobenius_norm", "sample_unit",
    "sample_unit_batch", "sample_ball", "ortho_act", "vertex_tensor",
    "edge_tensor", "example_counter", "example_223",
    "principal_flattening", "subset_flattening", "gram_matrix", "gram_det",
    "gram_det_minors", "gram_det_general", "gram_tuple",
    "singular_pairs", "dets_from_sigma_max",
    "hull_margins", "hull_vertices", "hull_membership", "q1", "q2",
    "q_surface", "q2_closed_form_n3", "pair_curves", "locus_membership_n3",
    "locus_membership_conjecture", "branch_p", "branch_q",
    "volume_fraction_linear",
    "build_target", "build_certificate", "verify_certificate",
    "certificate_term_count", "formula_term_count", "evaluate_certificate",
    "certificate_to_json", "certificate_from_json",
    "reference_certificate_n3", "reference_certificate_n4",
    "hyperdet", "invariant_vector", "equiv_search",
    "fuzz", "surface_grid", "write_surface_csv", "boundary_examples_report",
]

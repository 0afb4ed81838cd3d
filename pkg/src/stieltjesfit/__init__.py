"""Reconstruction of Stieltjes-class functions from noisy complex samples.

Given finitely many values w_j ~ f(z_j) at upper-half-plane nodes, the
package projects the data onto the cone of admissible value vectors, proves
the projection optimal with a Caprini-function certificate, represents the
result as an explicit rational spectral form, quantifies the reconstruction
uncertainty by Monte Carlo, and maps impedance-spectroscopy fits to Voigt
circuits.
"""

from .bounds import AdmissibleLens, Disk, admissible_lens, disk_N, disk_P
from .core import (ComplexSample, FeasibilityReport, PickPair,
                   RationalStieltjes, SampleSet, eval_rational, feasibility,
                   pick_matrices)
from .eis import (DHN_DEMO_PARAMS, EisDataset, VoigtCircuit, from_voigt,
                  model_eval, synth_dataset, to_samples, to_voigt)
from .errors import StieltjesFitError
from .fit import (AdHocBasis, CapriniCertificate, FitOptions, FitResult,
                  PointMass, UniformDensity, alternative_data, basis_matrix,
                  build_adhoc_basis, caprini, fit, project)
from .interp import (EarlyExit, InterpolantChain, StepParams, eval_chain,
                     interpolate, reduce, step_params)
from .numerics import (ScanResult, brent_root, min_norm_lsq, nnls,
                       scan_local_minima)
from .spectral import extract, step_lift
from .uncertainty import UncertaintyBand, band, estimate_rho

__version__ = "0.1.0"

__all__ = [
    "AdHocBasis", "AdmissibleLens", "CapriniCertificate", "ComplexSample",
    "DHN_DEMO_PARAMS", "Disk", "EarlyExit", "EisDataset", "FeasibilityReport",
    "FitOptions", "FitResult", "InterpolantChain", "PickPair", "PointMass",
    "RationalStieltjes", "SampleSet", "ScanResult", "StepParams",
    "StieltjesFitError", "UncertaintyBand", "UniformDensity", "VoigtCircuit",
    "admissible_lens", "alternative_data", "band", "basis_matrix",
    "brent_root", "build_adhoc_basis", "caprini", "disk_N", "disk_P",
    "estimate_rho", "eval_chain", "eval_rational", "extract", "feasibility",
    "fit", "from_voigt", "interpolate", "min_norm_lsq", "model_eval", "nnls",
    "pick_matrices", "project", "reduce", "scan_local_minima", "step_lift",
    "step_params", "synth_dataset", "to_samples", "to_voigt",
]

"""ppgkit: wrist-PPG activity recognition and heart-rate estimation at desk scale.

Submodules
----------
ingest      PhysioNet WFDB / CSV parsing into Record objects
dsp         Butterworth design, IIR filtering, resampling, segmentation
raster      segment-to-image rendering and PGM output
neural      minimal deterministic network engine (layers, losses, Adam)
heartrate   peak-detection baseline, ECG ground truth, HRE metric
models      CNNR and activity-classifier architectures
experiments dataset splits, training, evaluation tables, grid search
cache       binary dataset cache and prepared segment store
reports     CSV tables and standalone SVG charts
cli         command-line front end
"""

from ppgkit._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]

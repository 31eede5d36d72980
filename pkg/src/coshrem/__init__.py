"""Complex shearlet-based ridge and edge detection with benchmarking tools."""

from .baselines import CannyParams, canny, sobel
from .imagecore import (BinaryMap, GrayImage, RgbImage, load_gray,
                        render_anglemap, render_overlay, save_gray)
from .measures import (DetectionParams, MeasureMap, OrientationMap,
                       curvature_along, edge_measure, orientation_map,
                       ridge_measure)
from .metrics import distance_transform, pfom
from .phantoms import (PhantomSpec, corrupt, generate, poissonize,
                       STANDARD_PHANTOMS)
from .postprocess import hysteresis_threshold, thin, trace_curves
from .shearlets import ShearletSystem, SystemParams, build_system, cache_key, \
    calibrate_scales
from .xform import CoefficientVolume, analyze, coefficients_at

__version__ = "0.1.0"

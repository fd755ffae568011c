#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "roadseg/pipeline.hpp"
#include "roadseg/raster_io.hpp"
#include "roadseg/rotation.hpp"
#include "roadseg/synthetic.hpp"

namespace py = pybind11;
using namespace roadseg;

namespace {

DisparityImage image_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& values,
                                double invalid_marker) {
    if (values.ndim() != 2) {
        throw SizeError("expected a 2-D array of disparities");
    }
    const int height = static_cast<int>(values.shape(0));
    const int width = static_cast<int>(values.shape(1));
    std::vector<double> grid(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    std::memcpy(grid.data(), values.data(), grid.size() * sizeof(double));
    return new_disparity_image(width, height, grid, invalid_marker);
}

py::array_t<double> image_to_array(const DisparityImage& img) {
    py::array_t<double> out({img.height(), img.width()});
    auto* data = out.mutable_data();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        data[i] = img.valid()[i] ? img.values()[i] : nan;
    }
    return out;
}

py::array_t<bool> image_valid_mask(const DisparityImage& img) {
    py::array_t<bool> out({img.height(), img.width()});
    auto* data = out.mutable_data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        data[i] = img.valid()[i] != 0;
    }
    return out;
}

py::array_t<bool> mask_to_array(const SegmentationMask& mask) {
    py::array_t<bool> out({mask.height, mask.width});
    auto* data = out.mutable_data();
    for (std::size_t i = 0; i < mask.road.size(); ++i) {
        data[i] = mask.road[i] != 0;
    }
    return out;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return std::vector<double>(a.data(), a.data() + a.size());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "disparity transformation and road segmentation core";

    py::register_exception<Error>(m, "Error");

    py::class_<QuadraticRoadModel>(m, "QuadraticRoadModel")
        .def(py::init<double, double, double>(), py::arg("a0") = 0.0, py::arg("a1") = 0.0,
             py::arg("a2") = 0.0)
        .def_readwrite("a0", &QuadraticRoadModel::a0)
        .def_readwrite("a1", &QuadraticRoadModel::a1)
        .def_readwrite("a2", &QuadraticRoadModel::a2)
        .def("__call__", &QuadraticRoadModel::operator())
        .def("shift_argument", &QuadraticRoadModel::shift_argument, py::arg("h"))
        .def("__repr__", [](const QuadraticRoadModel& q) {
            return "QuadraticRoadModel(a0=" + std::to_string(q.a0) + ", a1=" + std::to_string(q.a1) +
                   ", a2=" + std::to_string(q.a2) + ")";
        });

    py::class_<DisparityImage>(m, "DisparityImage")
        .def(py::init(&image_from_array), py::arg("values"), py::arg("invalid_marker") = 0.0,
             "Build from a 2-D array; marker or non-finite entries become invalid.")
        .def_property_readonly("width", &DisparityImage::width)
        .def_property_readonly("height", &DisparityImage::height)
        .def_property_readonly("center_u", &DisparityImage::center_u)
        .def_property_readonly("center_v", &DisparityImage::center_v)
        .def("valid_count", &DisparityImage::valid_count)
        .def("to_numpy", &image_to_array, "Disparities as float64, invalid pixels NaN.")
        .def("valid_mask", &image_valid_mask);

    py::class_<SegmentationMask>(m, "SegmentationMask")
        .def_readonly("width", &SegmentationMask::width)
        .def_readonly("height", &SegmentationMask::height)
        .def("road_count", &SegmentationMask::road_count)
        .def("to_numpy", &mask_to_array);

    m.def("rotate_coords",
          [](double u, double v, double cu, double cv, double gamma) {
              const auto r = rotate_coords(u, v, cu, cv, gamma);
              return py::make_tuple(r.u_prime, r.v_prime);
          },
          py::arg("u"), py::arg("v"), py::arg("center_u"), py::arg("center_v"), py::arg("gamma"));
    m.def("rotate_map", &rotate_map, py::arg("map"), py::arg("gamma"));

    py::class_<VDisparityHistogram>(m, "VDisparityHistogram")
        .def_readonly("rows", &VDisparityHistogram::rows)
        .def_readonly("bins", &VDisparityHistogram::bins)
        .def_readonly("bin_width", &VDisparityHistogram::bin_width)
        .def_readonly("d_min", &VDisparityHistogram::d_min)
        .def("bin_index", &VDisparityHistogram::bin_index)
        .def("bin_center", &VDisparityHistogram::bin_center)
        .def("to_numpy", [](const VDisparityHistogram& h) {
            py::array_t<std::uint32_t> out({h.rows, h.bins});
            std::memcpy(out.mutable_data(), h.counts.data(),
                        h.counts.size() * sizeof(std::uint32_t));
            return out;
        });
    m.def("build_vdisparity", &build_vdisparity, py::arg("map"), py::arg("bin_width") = 1.0);

    py::class_<GssConfig>(m, "GssConfig")
        .def(py::init<>())
        .def_readwrite("gamma_lo", &GssConfig::gamma_lo)
        .def_readwrite("gamma_hi", &GssConfig::gamma_hi)
        .def_readwrite("tol", &GssConfig::tol)
        .def_readwrite("k", &GssConfig::k)
        .def_readwrite("coarse_scan_steps", &GssConfig::coarse_scan_steps);

    py::class_<RollEstimate>(m, "RollEstimate")
        .def_readonly("gamma", &RollEstimate::gamma)
        .def_readonly("e_min", &RollEstimate::e_min)
        .def_readonly("evaluations", &RollEstimate::evaluations)
        .def_readonly("bracket_shrinks", &RollEstimate::bracket_shrinks)
        .def_readonly("flat_objective", &RollEstimate::flat_objective)
        .def_readonly("model", &RollEstimate::model)
        .def_readonly("trace", &RollEstimate::trace);

    m.def("energy_at_gamma",
          [](const DisparityImage& map, double gamma) {
              const auto r = energy_at_gamma(map, gamma);
              return py::make_tuple(r.e_min, r.model);
          },
          py::arg("map"), py::arg("gamma"),
          "RMS fit energy and centre-relative profile at a candidate roll angle.");
    m.def("scan_energy_curve", &scan_energy_curve, py::arg("map"), py::arg("step"));
    m.def("estimate_roll_gss", &estimate_roll_gss, py::arg("map"), py::arg("config") = GssConfig{});

    py::class_<PathEntry>(m, "PathEntry")
        .def_readonly("v", &PathEntry::v)
        .def_readonly("d", &PathEntry::d);
    py::class_<OptimalPath>(m, "OptimalPath")
        .def(py::init([](const py::array_t<double, py::array::c_style | py::array::forcecast>& entries) {
                 if (entries.ndim() != 2 || entries.shape(1) != 2) {
                     throw SizeError("expected an Nx2 array of (v, d) entries");
                 }
                 OptimalPath p;
                 for (py::ssize_t i = 0; i < entries.shape(0); ++i) {
                     p.entries.push_back({static_cast<int>(entries.at(i, 0)), entries.at(i, 1)});
                 }
                 return p;
             }),
             py::arg("entries"))
        .def_readonly("energy", &OptimalPath::energy)
        .def_readonly("entries", &OptimalPath::entries)
        .def("to_numpy", [](const OptimalPath& p) {
            py::array_t<double> out({static_cast<py::ssize_t>(p.entries.size()), py::ssize_t{2}});
            auto view = out.mutable_unchecked<2>();
            for (py::ssize_t i = 0; i < view.shape(0); ++i) {
                view(i, 0) = p.entries[static_cast<std::size_t>(i)].v;
                view(i, 1) = p.entries[static_cast<std::size_t>(i)].d;
            }
            return out;
        });
    m.def("extract_path_dp", &extract_path_dp, py::arg("hist"), py::arg("smoothness") = 1.0);

    py::class_<RansacConfig>(m, "RansacConfig")
        .def(py::init<>())
        .def_readwrite("iterations", &RansacConfig::iterations)
        .def_readwrite("sample_size", &RansacConfig::sample_size)
        .def_readwrite("inlier_tol", &RansacConfig::inlier_tol)
        .def_readwrite("rng_seed", &RansacConfig::rng_seed)
        .def_readwrite("select_smallest_eta", &RansacConfig::select_smallest_eta)
        .def_readwrite("max_refinements", &RansacConfig::max_refinements);
    py::class_<RansacResult>(m, "RansacResult")
        .def_readonly("model", &RansacResult::model)
        .def_readonly("eta", &RansacResult::eta)
        .def_readonly("inliers", &RansacResult::inliers)
        .def_readonly("refinement_iterations", &RansacResult::refinement_iterations)
        .def_readonly("converged", &RansacResult::converged);
    m.def("ransac_parabola", &ransac_parabola, py::arg("path"), py::arg("config") = RansacConfig{});

    m.def("transform_map", &transform_map, py::arg("rotated"), py::arg("model"), py::arg("gamma"),
          py::arg("delta") = 30.0);
    m.def("otsu_threshold",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& values, int bins) {
              return otsu_threshold(to_vector(values), bins);
          },
          py::arg("values"), py::arg("bins") = 256);
    m.def("segment_road",
          [](const DisparityImage& trf, double delta, int bins) {
              return segment_road(trf, delta, bins);
          },
          py::arg("trf"), py::arg("delta") = 30.0, py::arg("bins") = 256);

    py::class_<InsetRegion>(m, "InsetRegion")
        .def(py::init<int, int, int, int, double>(), py::arg("u0"), py::arg("v0"), py::arg("u1"),
             py::arg("v1"), py::arg("offset"))
        .def_readwrite("u0", &InsetRegion::u0)
        .def_readwrite("v0", &InsetRegion::v0)
        .def_readwrite("u1", &InsetRegion::u1)
        .def_readwrite("v1", &InsetRegion::v1)
        .def_readwrite("offset", &InsetRegion::offset);
    py::class_<SyntheticSpec>(m, "SyntheticSpec")
        .def(py::init<>())
        .def_readwrite("width", &SyntheticSpec::width)
        .def_readwrite("height", &SyntheticSpec::height)
        .def_readwrite("model", &SyntheticSpec::model)
        .def_readwrite("gamma", &SyntheticSpec::gamma)
        .def_readwrite("kappa", &SyntheticSpec::kappa)
        .def_readwrite("seed", &SyntheticSpec::seed)
        .def_readwrite("insets", &SyntheticSpec::insets)
        .def_readwrite("quantize_step", &SyntheticSpec::quantize_step);
    m.def("generate_ground_truth", &generate_ground_truth, py::arg("spec"));
    m.def("ground_truth_labels", &ground_truth_labels, py::arg("spec"));

    py::enum_<NoiseKind>(m, "NoiseKind")
        .value("Uniform", NoiseKind::Uniform)
        .value("Gaussian", NoiseKind::Gaussian);
    m.def("add_noise", &add_noise, py::arg("map"), py::arg("kappa"), py::arg("seed"),
          py::arg("kind") = NoiseKind::Uniform);

    py::class_<SweepRecord>(m, "SweepRecord")
        .def_readonly("gamma_true", &SweepRecord::gamma_true)
        .def_readonly("gamma_est", &SweepRecord::gamma_est)
        .def_readonly("epsilon", &SweepRecord::epsilon)
        .def_readonly("ok", &SweepRecord::ok)
        .def_readonly("error", &SweepRecord::error);
    py::class_<SweepReport>(m, "SweepReport")
        .def_readonly("records", &SweepReport::records)
        .def_readonly("mean_error", &SweepReport::mean_error)
        .def_readonly("max_error", &SweepReport::max_error)
        .def_readonly("failures", &SweepReport::failures);
    m.def("run_accuracy_sweep",
          [](const SyntheticSpec& base, const std::vector<double>& gammas, const GssConfig& cfg) {
              return run_accuracy_sweep(base, gammas, cfg);
          },
          py::arg("base"), py::arg("gammas"), py::arg("config") = GssConfig{});
    m.def("uniform_angles", &uniform_angles, py::arg("lo"), py::arg("hi"), py::arg("count"));
    m.def("sweep_to_json", &sweep_to_json);
    m.def("sweep_to_csv", &sweep_to_csv);

    py::class_<RasterOptions>(m, "RasterOptions")
        .def(py::init<>())
        .def_readwrite("invalid_marker", &RasterOptions::invalid_marker)
        .def_readwrite("pgm_scale", &RasterOptions::pgm_scale);
    m.def("read_disparity",
          [](const std::string& path, const RasterOptions& opts) { return read_disparity(path, opts); },
          py::arg("path"), py::arg("options") = RasterOptions{});
    m.def("write_disparity",
          [](const std::string& path, const DisparityImage& map, const RasterOptions& opts) {
              write_disparity(path, map, opts);
          },
          py::arg("path"), py::arg("map"), py::arg("options") = RasterOptions{});
    m.def("write_mask_png", &write_mask_png, py::arg("path"), py::arg("mask"));

    py::class_<StageTimings>(m, "StageTimings")
        .def_readonly("estimate_roll_ms", &StageTimings::estimate_roll_ms)
        .def_readonly("rotate_ms", &StageTimings::rotate_ms)
        .def_readonly("vdisparity_ms", &StageTimings::vdisparity_ms)
        .def_readonly("path_ms", &StageTimings::path_ms)
        .def_readonly("ransac_ms", &StageTimings::ransac_ms)
        .def_readonly("transform_ms", &StageTimings::transform_ms)
        .def_readonly("segment_ms", &StageTimings::segment_ms)
        .def_readonly("total_ms", &StageTimings::total_ms);
    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("gss", &PipelineConfig::gss)
        .def_readwrite("bin_width", &PipelineConfig::bin_width)
        .def_readwrite("smoothness", &PipelineConfig::smoothness)
        .def_readwrite("ransac", &PipelineConfig::ransac)
        .def_readwrite("delta", &PipelineConfig::delta)
        .def_readwrite("otsu_bins", &PipelineConfig::otsu_bins)
        .def_readwrite("one_sided_segmentation", &PipelineConfig::one_sided_segmentation);
    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("roll", &PipelineResult::roll)
        .def_readonly("path", &PipelineResult::path)
        .def_readonly("ransac", &PipelineResult::ransac)
        .def_readonly("road_model", &PipelineResult::road_model)
        .def_readonly("threshold", &PipelineResult::threshold)
        .def_readonly("transformed", &PipelineResult::transformed)
        .def_readonly("mask", &PipelineResult::mask)
        .def_readonly("timings", &PipelineResult::timings);
    m.def("run_segment_pipeline", &run_segment_pipeline, py::arg("map"),
          py::arg("config") = PipelineConfig{});

#ifdef ROADSEG_VERSION
    m.attr("__version__") = ROADSEG_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}

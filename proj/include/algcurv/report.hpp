#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "algcurv/plane.hpp"
#include "algcurv/space.hpp"
#include "algcurv/surface.hpp"

namespace algcurv {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

inline Json json_complex(const Complex& c) { return Json::array({c.real(), c.imag()}); }

inline Json json_components(const std::vector<Complex>& v) {
    Json out = Json::array();
    for (const Complex& c : v) out.push_back(json_complex(c));
    return out;
}

inline Json json_point(const std::vector<Rational>& p) {
    Json out = Json::array();
    for (const Rational& c : p) out.push_back(to_double(c));
    return out;
}

inline Json report_skeleton(const std::string& kind, const std::string& f_text,
                            const std::optional<std::string>& g_text, const std::vector<Rational>& point) {
    Json out;
    out["kind"] = kind;
    out["f"] = f_text;
    out["g"] = g_text ? Json(*g_text) : Json(nullptr);
    out["point"] = json_point(point);
    out["multiplicity"] = nullptr;
    out["branches"] = Json::array();
    out["errors"] = Json::array();
    out["version"] = kToolVersion;
    return out;
}

inline Json json_curvature(const CurvatureValue& k) {
    Json out;
    out["finite"] = k.finite;
    out["value"] = k.finite ? Json(k.value) : Json(nullptr);
    return out;
}

inline Json plane_report(const std::string& f_text, const std::vector<Rational>& point, const PlaneAnalysis& a) {
    Json out = report_skeleton("plane", f_text, std::nullopt, point);
    out["multiplicity"] = a.multiplicity;
    for (const PlaneBranch& b : a.branches) {
        Json jb;
        jb["tangent"] = json_components(b.tangent.components);
        jb["tangent_is_real"] = b.tangent.is_real;
        jb["multiplicity"] = b.multiplicity;
        jb["curvature"] = json_curvature(b.curvature);
        jb["diagnostics"] = to_string(b.diagnostics);
        out["branches"].push_back(std::move(jb));
    }
    for (const std::string& w : a.warnings) out["errors"].push_back(Json{{"code", "Warning"}, {"message", w}});
    return out;
}

inline Json surface_report(const std::string& f_text, const std::vector<Rational>& point,
                           const SurfaceAnalysis& a) {
    Json out = report_skeleton("surface", f_text, std::nullopt, point);
    out["multiplicity"] = a.multiplicity;
    for (const SurfaceBranch& b : a.branches) {
        Json jb;
        jb["normal"] = json_components(b.normal.components);
        jb["gauss"] = b.curvature_defined ? Json(b.gauss) : Json(nullptr);
        jb["mean_signed"] = b.curvature_defined ? Json(b.mean_signed) : Json(nullptr);
        jb["mean_abs"] = b.curvature_defined ? Json(b.mean_abs) : Json(nullptr);
        jb["diagnostics"] = to_string(b.diagnostics);
        out["branches"].push_back(std::move(jb));
    }
    for (const std::string& w : a.warnings) out["errors"].push_back(Json{{"code", "Warning"}, {"message", w}});
    return out;
}

inline Json space_report(const std::string& f_text, const std::string& g_text,
                         const std::vector<Rational>& point, const SpaceAnalysis& a) {
    Json out = report_skeleton("space", f_text, g_text, point);
    out["multiplicity"] = a.multiplicity;
    for (const SpaceBranch& b : a.branches) {
        Json jb;
        jb["tangent"] = json_components(b.tangent.components);
        jb["curvature"] = json_curvature(b.curvature);
        Json jt;
        jt["defined"] = b.torsion.defined;
        jt["value"] = b.torsion.defined ? Json(b.torsion.value) : Json(nullptr);
        jb["torsion"] = std::move(jt);
        jb["multiplicity"] = b.multiplicity;
        out["branches"].push_back(std::move(jb));
    }
    for (const std::string& w : a.warnings) out["errors"].push_back(Json{{"code", "Warning"}, {"message", w}});
    return out;
}

inline Json error_report(const std::string& kind, const std::string& f_text,
                         const std::optional<std::string>& g_text, const std::string& code,
                         const std::string& message) {
    Json out;
    out["kind"] = kind;
    out["f"] = f_text;
    out["g"] = g_text ? Json(*g_text) : Json(nullptr);
    out["errors"] = Json::array({Json{{"code", code}, {"message", message}}});
    out["version"] = kToolVersion;
    return out;
}

/// Exit-code classes for the command line: 2 for bad input, 3 for solver
/// failures on valid input.
inline int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::SyntaxError:
        case ErrorCode::NonPolynomial:
        case ErrorCode::UnknownVariable:
        case ErrorCode::PointNotOnVariety:
        case ErrorCode::MixedRings:
        case ErrorCode::ZeroPolynomial:
        case ErrorCode::BadInput:
            return 2;
        default:
            return 3;
    }
}

}  // namespace algcurv

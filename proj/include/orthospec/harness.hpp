#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orthospec/families.hpp"
#include "orthospec/integmat.hpp"
#include "orthospec/lagrange.hpp"
#include "orthospec/spectra.hpp"

namespace orthospec {

enum class SideSelection { Plus, Minus, Both };
// Auto uses the coefficient route for Poly-Sinc points and the nodal matrices otherwise.
// Reassembled rebuilds the nodal matrix at each working precision.
enum class SpectralRoute { Auto, Nodal, Coefficient, Reassembled };

std::string to_string(SpectralRoute r);
SpectralRoute parse_spectral_route(const std::string& s);

struct CampaignSpec {
    std::vector<FamilySpec> families;
    std::vector<int> n_list;
    XiKind xi = XiKind::Cpc;
    SideSelection sides = SideSelection::Both;
    AssemblyOptions assembly;
    std::string out_dir = ".";
    bool mirror = true;
    TolMode tol_mode = TolMode::Certified;
    SpectralRoute route = SpectralRoute::Auto;
    int max_digits = 400;
    bool timings = true;
    int threads = 0;
    int max_n = 100;  // finite intervals; unbounded ones cap at 60 unless raised
    bool keep_eigenvalues = true;
};

struct ReportEntry {
    std::string family;
    std::string params;
    int n = 0;
    std::string side;
    std::string xi;
    std::optional<double> truncation;
    double min_real_part = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<Complex> eigenvalues;
    int quad_n = 0;
    int quad_n_tail = 0;
    double quad_h = 0.0;
    std::string quad_map;
    std::string assembly;
    std::string spectral_route;
    int digits = 16;
    double tolerance = 0.0;  // error bound on Re of the leftmost eigenvalue
    double tol_abs = 0.0;    // 1e-9 ||B||_inf
    double row_sum_defect = 0.0;
    bool mirrored = false;
    double wall_ms = 0.0;
    std::string note;

    bool operator==(const ReportEntry&) const = default;
};

struct VerificationReport {
    std::vector<ReportEntry> entries;
    int verified = 0;
    int falsified = 0;
    int inconclusive = 0;

    void tally();
    bool operator==(const VerificationReport&) const = default;
};

VerificationReport run_cpc(const CampaignSpec& spec);
VerificationReport run_npc(const CampaignSpec& spec);

// Certified verdict for one side of an assembled pair.
CertifiedSpectrum certify_pair_side(const IntegralMatrixPair& pair, Side side, SpectralRoute route, TolMode mode,
                                    int max_digits = 400);

enum class ReportFormat { Json, Csv };
ReportFormat parse_format(const std::string& s);
std::string report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const std::string& text);
std::string report_to_csv(const VerificationReport& r);
void emit_report(const VerificationReport& r, ReportFormat format, const std::string& path);

struct ConvergenceExample {
    int id = 1;
    std::function<double(double)> f;
    FamilySpec family;
    std::string description;
};

ConvergenceExample convergence_example(int id);
FitResult run_convergence(int example, const std::vector<int>& n_list, const std::optional<FamilySpec>& family,
                          const std::string& csv_path, const std::string& json_path);
std::string convergence_csv(const FitResult& fr);

ResolventField run_resolvent(const IntegralMatrixPair& pair, Side side, const std::optional<GridSpec>& grid,
                             const std::string& csv_path);
GridSpec auto_grid(const std::vector<Complex>& eigenvalues, int n_re, int n_im);
std::string resolvent_csv(const ResolventField& f);

void write_text(const std::string& path, const std::string& text);
std::string pair_to_json(const IntegralMatrixPair& pair);
IntegralMatrixPair pair_from_json(const std::string& text);
std::string spectrum_to_json(const Spectrum& s);

// "4:4:40" or "10,20,30"
std::vector<int> parse_int_list(const std::string& s);

}  // namespace orthospec

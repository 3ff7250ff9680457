// Copyright 2026 The ldpbd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPBD_IO_HPP
#define LDPBD_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "ldpbd/designs.hpp"
#include "ldpbd/estimation.hpp"
#include "ldpbd/mechanism.hpp"
#include "ldpbd/optimality.hpp"
#include "ldpbd/simulation.hpp"

namespace ldpbd {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double x);

// Design JSON: {"v", "b", "r", "k", "lambda", "blocks": [[...], ...]} with
// blocks sorted within and across. The dense variant replaces "blocks" with
// "incidence": b rows of 0/1.
std::string design_to_json(const IncidenceMatrix& a);
std::string design_to_json_dense(const IncidenceMatrix& a);

// Accepts either form; "v" is required with "blocks". The design is
// re-verified after loading.
IncidenceMatrix design_from_json(const std::string& text);

// TPM CSV: one row per output, full-precision entries, no header.
std::string tpm_to_csv(const TransitionMatrix& q);

// Parses and validates: rectangular, all entries positive, column sums
// within 1e-6 of 1.
TransitionMatrix tpm_from_csv(const std::string& text);

// Mechanism JSON: {"epsilon", "design": {...}, "p", "large", "small",
// "comm_bits"}.
std::string mechanism_to_json(const Mechanism& mech);

// RiskConstants JSON: {"f_q", "a_q", "b_q", "trace_inv", "minimax_n_risk"}.
std::string risk_to_json(const RiskConstants& rc);

// Verifier report JSON mirroring VerifierReport field for field.
std::string report_to_json(const VerifierReport& report);

// Results CSV: header "trial,l2sq_error,seed", one row per trial.
std::string records_to_csv(const std::vector<TrialRecord>& records);

// Summary JSON: mean_n_risk, std_error, theory_bound, z_gap plus an echo of
// the generating configuration.
std::string summary_to_json(const Summary& summary, const SimConfig& config);

// Comparison table serialised as a JSON array of rows.
std::string compare_to_json(const std::vector<CompareRow>& rows, double epsilon,
                            std::int64_t n, int trials, std::uint64_t seed);

// A JSON array of probabilities, validated as a distribution.
Distribution distribution_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ldpbd

#endif  // LDPBD_IO_HPP

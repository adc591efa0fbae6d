#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "specpert/io.hpp"
#include "specpert/montecarlo.hpp"

namespace specpert::report {

// Columns n, dev_A_over_n, dev_minus2bhat, then m_hat, A_over_n, mean_minus2bhat.
io::CsvTable table1_csv(const std::vector<AggregateResult>& rows);
// Columns n, dev_Bn2, dev_Vtilde, then s2_hat, Bn2_over_n2, mean_Vtilde, dev_mean_Vtilde.
io::CsvTable table2_csv(const std::vector<AggregateResult>& rows);
// Columns bin_center, density, reference_density.
io::CsvTable density_csv(const DensityCurve& curve);
// One row per replication, failures included with NaN fields.
io::CsvTable replications_csv(const ReplicationSet& set);

nlohmann::json config_json(const ExperimentConfig& cfg);
nlohmann::json aggregate_json(const AggregateResult& a);

}  // namespace specpert::report

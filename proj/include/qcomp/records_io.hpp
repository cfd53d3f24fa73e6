// SPDX-License-Identifier: Apache-2.0
//
// qcomp: coordinated multipoint beamforming and power control for
// multicell massive MIMO with low-resolution ADCs and DACs
// Copyright (C) 2026 The qcomp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef QCOMP_RECORDS_IO_HPP
#define QCOMP_RECORDS_IO_HPP

#include <string>
#include <vector>

#include "qcomp/harness.hpp"

namespace qcomp {

// One JSON object per line, numbers with 17 significant digits. Missing
// optional values and infinite SINRs are written as null.
std::string record_to_json(const TrialRecord& r);
TrialRecord record_from_json(const std::string& line);

void write_records(const std::string& path, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records(const std::string& path);

void write_cdf_csv(const std::string& path, const std::vector<CdfRow>& rows);
void write_power_sweep_csv(const std::string& path, const std::vector<PowerSweepRow>& rows);
void write_metadata(const std::string& path, const ExperimentConfig& config, std::size_t record_count);

// records.jsonl, cdf.csv, power_sweep.csv and metadata.json under
// config.output_dir. Returns the paths written.
std::vector<std::string> write_outputs(const ExperimentConfig& config, const std::vector<TrialRecord>& records);

}  // namespace qcomp

#endif  // QCOMP_RECORDS_IO_HPP

// observable_series.hpp — time series recorded during an evolution

#pragma once

#include <string>
#include <vector>

namespace chainqed {

struct ObservableSeries {
    std::vector<long> step;
    std::vector<double> t_ns;
    std::vector<double> kt_over_2pi;
    std::vector<double> sigma_z;
    std::vector<double> n_a;
    std::vector<double> delta_sat;
    std::vector<double> max_bond_entropy;
    std::vector<double> energy; // empty unless energy recording was enabled

    bool delta_sat_flag = false;  // any sample beyond threshold
    double max_norm_drift = 0.0;  // max |1 - <psi|psi>| seen at records
    double max_step_norm_change = 0.0;

    int size() const { return static_cast<int>(step.size()); }

    // columns: step,t_ns,kt_over_2pi,sigma_z,n_a,delta_sat,max_bond_entropy
    void write_csv(const std::string& path) const;
};

} // namespace chainqed

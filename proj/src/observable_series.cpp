#include "chainqed/observable_series.hpp"

#include "chainqed/csv.hpp"

namespace chainqed {

void ObservableSeries::write_csv(const std::string& path) const {
    CsvWriter csv(path);
    csv.header({"step", "t_ns", "kt_over_2pi", "sigma_z", "n_a", "delta_sat",
                "max_bond_entropy"});
    for (int i = 0; i < size(); ++i)
        csv.raw_row({std::to_string(step[i]), format_g17(t_ns[i]),
                     format_g17(kt_over_2pi[i]), format_g17(sigma_z[i]),
                     format_g17(n_a[i]), format_g17(delta_sat[i]),
                     format_g17(max_bond_entropy[i])});
    csv.commit();
}

} // namespace chainqed

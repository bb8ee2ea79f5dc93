#include "hypodist/error_table.hpp"

#include <charconv>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hypodist {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

ErrorTable::ErrorTable(std::vector<std::size_t> ks, std::vector<MetricKind> metrics, std::size_t replications)
    : ks_(std::move(ks)), metrics_(std::move(metrics)), replications_(replications),
      rates_(ks_.size() * metrics_.size() * replications_, 0.0) {}

std::size_t ErrorTable::slot(std::size_t ki, std::size_t mi, std::size_t r) const {
    if (ki >= ks_.size() || mi >= metrics_.size() || r >= replications_)
        throw std::out_of_range("error table index out of range");
    return (ki * metrics_.size() + mi) * replications_ + r;
}

void ErrorTable::set(std::size_t ki, std::size_t mi, std::size_t r, double rate) {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw std::invalid_argument("misclassification rate must lie in [0, 1]");
    rates_[slot(ki, mi, r)] = rate;
}

double ErrorTable::rate(std::size_t ki, std::size_t mi, std::size_t r) const { return rates_[slot(ki, mi, r)]; }

double ErrorTable::mean(std::size_t ki, std::size_t mi) const {
    if (replications_ == 0)
        return 0.0;
    double acc = 0.0;
    for (std::size_t r = 0; r < replications_; ++r)
        acc += rate(ki, mi, r);
    return acc / static_cast<double>(replications_);
}

double ErrorTable::mean_for(std::size_t k, MetricKind metric) const {
    for (std::size_t ki = 0; ki < ks_.size(); ++ki)
        for (std::size_t mi = 0; mi < metrics_.size(); ++mi)
            if (ks_[ki] == k && metrics_[mi] == metric)
                return mean(ki, mi);
    throw std::out_of_range("no entry for k = " + std::to_string(k) + ", metric " + std::string(to_string(metric)));
}

void ErrorTable::write_csv(std::ostream& os) const {
    os << "k,metric,mean_rate,replication,rate\n";
    for (std::size_t ki = 0; ki < ks_.size(); ++ki) {
        for (std::size_t mi = 0; mi < metrics_.size(); ++mi) {
            const std::string mean_text = format_double(mean(ki, mi));
            for (std::size_t r = 0; r < replications_; ++r) {
                os << ks_[ki] << ',' << to_string(metrics_[mi]) << ',' << mean_text << ',' << r << ','
                   << format_double(rate(ki, mi, r)) << '\n';
            }
        }
    }
}

std::string ErrorTable::csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

void ErrorTable::write_aligned(std::ostream& os) const {
    os << std::setw(4) << "k";
    for (MetricKind m : metrics_)
        os << std::setw(12) << to_string(m);
    os << '\n';
    for (std::size_t ki = 0; ki < ks_.size(); ++ki) {
        os << std::setw(4) << ks_[ki];
        for (std::size_t mi = 0; mi < metrics_.size(); ++mi)
            os << std::setw(12) << std::fixed << std::setprecision(3) << mean(ki, mi);
        os << '\n';
    }
    os.unsetf(std::ios::floatfield);
}

} // namespace hypodist

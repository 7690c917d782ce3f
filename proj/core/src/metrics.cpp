#include "footfall/metrics.hpp"

#include <sstream>

namespace footfall {

Metrics evaluate(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size())
        throw ShapeError("evaluate: " + std::to_string(predicted.size()) + " predictions vs " +
                         std::to_string(truth.size()) + " truth labels");
    if (predicted.empty()) throw DegenerateInputError("evaluate: no rows");

    Metrics m;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool pred_pos = predicted[i] == 1;
        const bool true_pos = truth[i] == 1;
        if (pred_pos && true_pos) ++m.tp;
        else if (!pred_pos && !true_pos) ++m.tn;
        else if (pred_pos && !true_pos) ++m.fp;
        else ++m.fn;
    }
    const double total = static_cast<double>(m.tp + m.tn + m.fp + m.fn);
    m.accuracy = static_cast<double>(m.tp + m.tn) / total;
    m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

std::string Metrics::to_json(const std::string& case_name) const {
    std::ostringstream os;
    os.precision(10);
    os << "{\n";
    if (!case_name.empty()) os << "  \"case_name\": \"" << case_name << "\",\n";
    os << "  \"tp\": " << tp << ",\n  \"tn\": " << tn << ",\n  \"fp\": " << fp
       << ",\n  \"fn\": " << fn << ",\n  \"accuracy\": " << accuracy
       << ",\n  \"precision\": " << precision << ",\n  \"recall\": " << recall
       << ",\n  \"f1\": " << f1 << "\n}\n";
    return os.str();
}

} // namespace footfall

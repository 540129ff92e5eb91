#pragma once

// Flat `key = value unit` reports. Keys appear in insertion order, so the same
// object always renders to the same bytes.

#include <string>
#include <string_view>
#include <vector>

#include "fpcav/cavity.hpp"
#include "fpcav/cqed.hpp"
#include "fpcav/fitting.hpp"
#include "fpcav/tmm.hpp"

namespace fpcav
{
class Report
{
public:
    void add(std::string key, double value, std::string unit = {});
    void add(std::string key, bool value);
    void add(std::string key, int value);
    void add_text(std::string key, std::string text);

    std::string render() const;
    // Value text of the first line with this key; throws if absent.
    const std::string &value(std::string_view key) const;

private:
    struct Line
    {
        std::string key;
        std::string value;
        std::string unit;
    };
    std::vector<Line> lines_;
};

/// %.10g: readable and stable across runs.
std::string report_number(double value);

Report make_report(const CouplingReport &report);
Report make_report(const CavityFigures &figures);
Report make_report(const EffectiveLength &length);
Report make_report(const FitResult &fit, const std::vector<std::string> &units = {});
} // namespace fpcav

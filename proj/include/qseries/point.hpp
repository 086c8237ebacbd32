#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qseries/errors.hpp"
#include "qseries/types.hpp"

namespace qseries {

enum class Slot { a, b, c, d, r, s, t, h, u, v, z, beta, gamma, delta, lambda, alpha };

inline constexpr std::size_t kSlotCount = 16;

inline constexpr std::array<std::string_view, kSlotCount> kSlotNames{
    "a", "b", "c", "d", "r", "s", "t", "h", "u", "v", "z", "beta", "gamma", "delta", "lambda", "alpha"};

inline std::string_view slot_name(Slot s) { return kSlotNames[static_cast<std::size_t>(s)]; }

inline std::optional<Slot> slot_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < kSlotCount; ++i)
        if (kSlotNames[i] == name)
            return static_cast<Slot>(i);
    return std::nullopt;
}

/// Named parameter values for one identity evaluation. Complex slots that an
/// identity does not read stay unset. Integer indices (n, m) and an angle
/// theta are carried for identities that are stated pointwise.
class ParameterPoint {
public:
    explicit ParameterPoint(Base q) : q_(q) {}

    Base q() const noexcept { return q_; }
    void set_q(Base q) noexcept { q_ = q; }

    bool has(Slot s) const { return slots_[index(s)].has_value(); }

    QComplex get(Slot s) const
    {
        const auto& v = slots_[index(s)];
        if (!v)
            throw domain_error("parameter '" + std::string(slot_name(s)) + "' is not set");
        return *v;
    }

    QComplex operator[](Slot s) const { return get(s); }

    ParameterPoint& set(Slot s, QComplex value)
    {
        slots_[index(s)] = value;
        return *this;
    }

    ParameterPoint& unset(Slot s)
    {
        slots_[index(s)].reset();
        return *this;
    }

    std::vector<Slot> set_slots() const
    {
        std::vector<Slot> out;
        for (std::size_t i = 0; i < kSlotCount; ++i)
            if (slots_[i])
                out.push_back(static_cast<Slot>(i));
        return out;
    }

    std::optional<double> theta;
    std::optional<int> n;
    std::optional<int> m;

private:
    static std::size_t index(Slot s) { return static_cast<std::size_t>(s); }

    Base q_;
    std::array<std::optional<QComplex>, kSlotCount> slots_{};
};

} // namespace qseries

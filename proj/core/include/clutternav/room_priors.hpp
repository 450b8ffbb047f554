#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "clutternav/floorplan.hpp"

namespace clutternav {

/// Object categories by role.
const std::vector<std::string>& task_object_categories();
const std::vector<std::string>& receptacle_categories();
const std::vector<std::string>& obstacle_categories();

/// Static category -> room-type likelihood table. Unlisted pairs get the
/// table's default weight.
class RoomPriors {
public:
    /// The table shipped with the library.
    static const RoomPriors& builtin();
    static RoomPriors from_json(std::string_view text);
    static RoomPriors from_file(const std::string& path);

    double weight(std::string_view category, RoomType type) const;
    double default_weight() const { return default_weight_; }
    bool has_category(std::string_view category) const;

    /// Per-room weights for placing an object of `category` in `plan`.
    std::vector<double> room_weights(std::string_view category, const Floorplan& plan) const;

private:
    double default_weight_ = 0.05;
    std::map<std::string, std::map<RoomType, double>, std::less<>> table_;
};

}  // namespace clutternav

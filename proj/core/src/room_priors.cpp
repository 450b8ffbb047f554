#include "clutternav/room_priors.hpp"

#include <fstream>
#include <sstream>

#include "clutternav/errors.hpp"
#include "json_io.hpp"
#include "room_priors_data.hpp"

namespace clutternav {

const std::vector<std::string>& task_object_categories() {
    static const std::vector<std::string> names = {"AlarmClock", "Mug",   "Vase",  "Basketball",
                                                   "Pillow",     "Book",  "Laptop", "Apple",
                                                   "Plate",      "Towel", "RemoteControl", "Candle"};
    return names;
}

const std::vector<std::string>& receptacle_categories() {
    static const std::vector<std::string> names = {"DiningTable", "Desk",       "Bed",       "Shelf",
                                                   "Sofa",        "ArmChair",   "CounterTop", "SideTable",
                                                   "StudyTable",  "Dresser"};
    return names;
}

const std::vector<std::string>& obstacle_categories() {
    static const std::vector<std::string> names = {"Box",    "Chair",     "LaundryBasket", "Bag",
                                                   "ToyBox", "FloorLamp", "Stool",         "Plant"};
    return names;
}

const RoomPriors& RoomPriors::builtin() {
    static const RoomPriors priors = from_json(detail::kRoomPriorsJson);
    return priors;
}

RoomPriors RoomPriors::from_json(std::string_view text) {
    const auto j = detail::parse_json(text);
    RoomPriors priors;
    if (j.contains("default_weight")) priors.default_weight_ = detail::require<double>(j, "default_weight");
    if (priors.default_weight_ < 0.0) throw FormatError("default_weight must be non-negative");
    const auto& cats = detail::require_field(j, "categories");
    if (!cats.is_object()) throw FormatError("categories must be an object");
    for (const auto& [category, rooms] : cats.items()) {
        if (!rooms.is_object()) throw FormatError("room weights must be an object");
        auto& row = priors.table_[category];
        for (const auto& [room, w] : rooms.items()) {
            const auto type = parse_room_type(room);
            if (!type) throw FormatError("unknown room type '" + room + "' in prior table");
            if (!w.is_number() || w.get<double>() < 0.0) throw FormatError("prior weights must be non-negative numbers");
            row[*type] = w.get<double>();
        }
    }
    return priors;
}

RoomPriors RoomPriors::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open prior table: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

double RoomPriors::weight(std::string_view category, RoomType type) const {
    const auto row = table_.find(category);
    if (row == table_.end()) return default_weight_;
    const auto it = row->second.find(type);
    return it == row->second.end() ? default_weight_ : it->second;
}

bool RoomPriors::has_category(std::string_view category) const { return table_.find(category) != table_.end(); }

std::vector<double> RoomPriors::room_weights(std::string_view category, const Floorplan& plan) const {
    std::vector<double> out;
    out.reserve(plan.rooms.size());
    for (const Room& r : plan.rooms) out.push_back(weight(category, r.type));
    return out;
}

}  // namespace clutternav

#ifndef ISOSCHED_SCHEDULE_IO_HPP
#define ISOSCHED_SCHEDULE_IO_HPP

#include <string>

#include "isosched/schedule.hpp"

namespace isosched {

// Serialized schedules are stable: two dumps of the same schedule are
// byte-identical, so they work as golden files and as cache keys.
std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const std::string& text);

Schedule load_schedule(const std::string& path);
void save_schedule(const Schedule& s, const std::string& path);

}  // namespace isosched

#endif

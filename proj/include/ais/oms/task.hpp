#pragma once

#include <string>

#include "ais/core/types.hpp"

namespace ais::oms {

enum class TaskKind {
    takeoff,
    explore_ball,
    explore_balloon,
    track,
    grab,
    grab_standby,
    pop,
    land,
    restart
};

enum class TaskClass { static_task, dynamic_task };
enum class TaskPriority { safety, mission };
enum class TaskStatus { pending, active, done, failed };

struct Task {
    int id = 0;
    TaskKind kind = TaskKind::takeoff;
    TaskClass task_class = TaskClass::static_task;
    TaskPriority priority = TaskPriority::mission;
    int assignee = -1;
    TaskStatus status = TaskStatus::pending;
};

enum class EventKind {
    ball_detected,
    ball_lost,
    grab_success,
    grab_failed,
    balloon_detected,
    balloon_popped,
    exploration_complete,
    agent_failed,
    comms_lost,
    reset
};

struct MissionEvent {
    EventKind kind = EventKind::ball_detected;
    int agent_id = -1;
    double t = 0.0;
    double payload_kg = 0.0; // grab detection: limit switches need >= 0.05 kg
};

// the limit-switch calibration from the grab-detection design
inline constexpr double kGrabDetectMinKg = 0.05;

const char* to_string(TaskKind k);
const char* to_string(TaskStatus s);
const char* to_string(EventKind k);

struct TaskSwitch {
    double t = 0.0;
    int agent_id = -1;
    TaskKind old_task = TaskKind::takeoff;
    TaskKind new_task = TaskKind::takeoff;
    std::string trigger;
};

}  // namespace ais::oms

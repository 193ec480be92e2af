#pragma once

// Convenience umbrella for the whole library.

#include "seampose/dataset.hpp"
#include "seampose/errors.hpp"
#include "seampose/evaluation.hpp"
#include "seampose/kinematics.hpp"
#include "seampose/live.hpp"
#include "seampose/model.hpp"
#include "seampose/motion.hpp"
#include "seampose/replay.hpp"
#include "seampose/rng.hpp"
#include "seampose/rotation.hpp"
#include "seampose/session.hpp"
#include "seampose/signal.hpp"
#include "seampose/simulator.hpp"
#include "seampose/skeleton.hpp"
#include "seampose/smoothing.hpp"
#include "seampose/tensor.hpp"
#include "seampose/train.hpp"
#include "seampose/transport.hpp"
#include "seampose/wire.hpp"

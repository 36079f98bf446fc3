#pragma once

#include "uavspoof/baseline.hpp"
#include "uavspoof/channel.hpp"
#include "uavspoof/common.hpp"
#include "uavspoof/config_io.hpp"
#include "uavspoof/dataset.hpp"
#include "uavspoof/dataset_io.hpp"
#include "uavspoof/features.hpp"
#include "uavspoof/mlp.hpp"
#include "uavspoof/model_io.hpp"
#include "uavspoof/report.hpp"
#include "uavspoof/scenario.hpp"
#include "uavspoof/stats.hpp"
#include "uavspoof/train.hpp"
#include "uavspoof/tune.hpp"

#pragma once

#include <bsplace/baselines.hpp>
#include <bsplace/core.hpp>
#include <bsplace/geometry.hpp>
#include <bsplace/grid.hpp>
#include <bsplace/io.hpp>
#include <bsplace/metrics.hpp>
#include <bsplace/optimizer.hpp>
#include <bsplace/radio.hpp>
#include <bsplace/scenario.hpp>
#include <bsplace/scene.hpp>
#include <bsplace/synth.hpp>

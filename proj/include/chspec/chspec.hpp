#pragma once

#include <chspec/error.hpp>
#include <chspec/precision.hpp>
#include <chspec/poly.hpp>
#include <chspec/poly_matrix.hpp>
#include <chspec/roots.hpp>
#include <chspec/phase_space.hpp>
#include <chspec/string_system.hpp>
#include <chspec/herglotz.hpp>
#include <chspec/direct.hpp>
#include <chspec/inverse.hpp>
#include <chspec/exp_sum.hpp>
#include <chspec/flow.hpp>
#include <chspec/io.hpp>

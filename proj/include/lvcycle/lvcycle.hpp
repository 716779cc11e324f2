#pragma once

#include "lvcycle/dynamics.hpp"
#include "lvcycle/errors.hpp"
#include "lvcycle/estimation.hpp"
#include "lvcycle/io.hpp"
#include "lvcycle/model.hpp"
#include "lvcycle/observables.hpp"
#include "lvcycle/response.hpp"

#pragma once

#include "rmdp/model.hpp"
#include "rmdp/serialize.hpp"
#include "rmdp/reduction.hpp"
#include "rmdp/mdp.hpp"
#include "rmdp/game.hpp"
#include "rmdp/baselines.hpp"
#include "rmdp/benchgen.hpp"
#include "rmdp/oracle.hpp"

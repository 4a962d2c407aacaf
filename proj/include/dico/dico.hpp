#pragma once

// Everything: kernel, bifunctors, strong dinaturals, dicodensity, Bunting limits,
// codensity ends, algebra hom objects and representation checks, plus the runner.
#include "dico/experiments.hpp"

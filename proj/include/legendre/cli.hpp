#pragma once

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "io.hpp"

#ifndef LEGENDRE_VERSION
#define LEGENDRE_VERSION "0.1.0"
#endif

namespace legendre::cli {

using io::json;

// Everything a run depends on. Exact inputs stay as text until the command
// parses them at the working precision.
struct RunConfig {
    std::string command;
    int precision = 64;
    int workers = 0; // 0 means one per hardware thread
    std::string format; // empty: the command's default
    std::string output; // empty: standard output

    std::string lambda;
    std::string x, y;
    std::string abscissas;
    std::string ybranches;
    std::string point;
    std::string poly;
    std::string excluded = "0;1";

    std::string center = "0.5";
    std::string radius = "0.3";
    std::string resolution = "0.02";
    double margin = 0.05;

    long bound = 100;
    long T = 8;
    int max_order = 12;
    std::string T_list = "4,8,16,32,64";
    std::string tolerance = "lipschitz";

    double delta = 0.05;
    double zimmer_c = 3;
    double q = 1;
    double gamma1 = 1, gamma2 = 1, gamma5 = 1, gamma6 = 1, gamma7 = 1, gamma9 = 1;

    // Canonical text of every setting that can change the output.
    std::string canonical() const
    {
        std::ostringstream s;
        s << std::setprecision(17);
        s << "command=" << command << "\nprecision=" << precision << "\nformat=" << format << "\nlambda=" << lambda
          << "\nx=" << x << "\ny=" << y << "\nabscissas=" << abscissas << "\nybranches=" << ybranches
          << "\npoint=" << point << "\npoly=" << poly << "\nexcluded=" << excluded << "\ncenter=" << center
          << "\nradius=" << radius << "\nresolution=" << resolution << "\nmargin=" << margin << "\nbound=" << bound
          << "\nT=" << T << "\nmax-order=" << max_order << "\nT-list=" << T_list << "\ntolerance=" << tolerance
          << "\ndelta=" << delta << "\nzimmer-c=" << zimmer_c << "\nq=" << q << "\ngamma=" << gamma1 << ","
          << gamma2 << "," << gamma5 << "," << gamma6 << "," << gamma7 << "," << gamma9 << "\n";
        return s.str();
    }

    std::string hash() const
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string>{}(canonical()));
        return buf;
    }
};

// Runs one command line. Exit status: 0 success, 1 input error, 2 precision or
// resource error.
int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

} // namespace legendre::cli

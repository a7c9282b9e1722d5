// SPDX-License-Identifier: Apache-2.0
//
// kms-product: statistics of products of kappa-mu shadowed random variables
// Copyright (C) 2026 The kms-product authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Acceptance runner: spawns `kms validate --full --seed 42` twice, reports
// criteria 1 to 9 from the first run and byte-for-byte reproducibility of the
// two runs as criterion 10. Exit status 0 iff every criterion passes.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#ifndef KMS_CLI_PATH
#error "KMS_CLI_PATH must name the kms executable"
#endif

namespace
{
    struct Capture
    {
        std::string out;
        int status = -1;
    };

    Capture spawn(const std::string &command)
    {
        Capture c;
        FILE *p = popen(command.c_str(), "r");
        if (!p)
            return c;
        std::array<char, 4096> buf;
        for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), p)) > 0;)
            c.out.append(buf.data(), n);
        const int raw = pclose(p);
        c.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        return c;
    }

    std::string first_difference(const std::string &a, const std::string &b)
    {
        std::istringstream sa(a), sb(b);
        std::string la, lb;
        for (int line = 1;; ++line)
        {
            const bool ga = static_cast<bool>(std::getline(sa, la)), gb = static_cast<bool>(std::getline(sb, lb));
            if (!ga && !gb)
                return "none";
            if (la != lb || ga != gb)
                return "line " + std::to_string(line);
        }
    }
}

int main(int argc, char **argv)
{
    const std::string seed = argc > 1 ? argv[1] : "42";
    const std::string base = std::string("'") + KMS_CLI_PATH + "' validate --full --seed " + seed;

    const Capture first = spawn(base);
    const Capture second = spawn("KMS_THREADS=3 " + base);

    std::map<int, std::string> lines;
    std::istringstream in(first.out);
    for (std::string line; std::getline(in, line);)
    {
        int id = 0;
        if ((line.rfind("PASS ", 0) == 0 || line.rfind("FAIL ", 0) == 0) && std::sscanf(line.c_str() + 5, "%d", &id) == 1)
            lines[id] = line;
    }

    bool ok = true;
    for (int id = 1; id <= 9; ++id)
    {
        const auto it = lines.find(id);
        const std::string line = it != lines.end() ? it->second
                                                   : "FAIL " + std::to_string(id) + " missing from the validate output";
        ok = ok && line.rfind("PASS", 0) == 0;
        std::cout << line << "\n";
    }

    const bool same = !first.out.empty() && first.out == second.out;
    const bool exits = first.status == second.status && (first.status == 0 || first.status == 4);
    ok = ok && same && exits;
    std::cout << (same && exits ? "PASS" : "FAIL") << " 10 reproducibility: validate --full --seed " << seed
              << " run twice (default threads, then KMS_THREADS=3): " << first.out.size() << " and "
              << second.out.size() << " bytes, first difference: " << first_difference(first.out, second.out)
              << ", exit codes " << first.status << " and " << second.status << "\n";
    return ok ? 0 : 1;
}

// Copyright 2026 The bell-kernels Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Prints the quantum value, local bound and noise threshold of each kernel for d = 2..10 as CSV.

#include <cstdio>

#include "bell/bell.hpp"

int main() {
    std::printf("kernel,d,quantum,lhv_max,ratio,violated\n");
    for (bell::KernelKind kind : bell::kKernelKinds) {
        for (int d = 2; d <= 10; ++d) {
            bell::ViolationReport r = bell::violation_report(kind, d);
            std::printf("%s,%d,%.10f,%.10f,%.10f,%s\n", r.kernel_name.c_str(), d, r.quantum_value, r.lhv_max, r.ratio,
                        r.violated ? "true" : "false");
        }
    }
    std::printf("\nd,cd_closed_form,noise_threshold\n");
    for (int d : {2, 3, 4, 10, 100, 1000}) {
        std::printf("%d,%.12f,%.12f\n", d, bell::cd_quantum_closed_form(d), bell::noise_threshold(d));
    }
    return 0;
}

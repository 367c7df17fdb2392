// Copyright 2026 The TinyIDS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* Reference harness driver used by the test suite.
 *
 * Reads nine space-separated floats per stdin line, calls tids_predict and
 * prints "<class> <score>" with six decimals.
 */
#include <stdio.h>
#include <stdlib.h>

int tids_predict(const float fv[9], float* score);

int main(void) {
  char line[1024];
  while (fgets(line, sizeof line, stdin)) {
    float fv[9];
    char* p = line;
    int i;
    for (i = 0; i < 9; ++i) {
      char* end;
      fv[i] = strtof(p, &end);
      if (end == p) return 2;
      p = end;
    }
    {
      float score = 0.0f;
      int cls = tids_predict(fv, &score);
      printf("%d %.6f\n", cls, (double)score);
    }
  }
  return 0;
}

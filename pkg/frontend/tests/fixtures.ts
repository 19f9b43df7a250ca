/** Fixtures captured verbatim from a live BCA server and harness run,
 * so the tests assert against genuine wire shapes. */

import type { AdminUser, AnalyticsResponse, ChainHead, PolicyResponse } from "../src/types.js";

export const USERS: AdminUser[] = [
  {
    "user_id": "fx-u0",
    "name": "Simulated User 0",
    "privileges": [
      "read"
    ],
    "declared_gender": "male",
    "declared_age": 25,
    "created_at": 1786322683.9372942,
    "ledger_block": 0,
    "level": 73.0,
    "transactions": 5
  },
  {
    "user_id": "fx-u1",
    "name": "Simulated User 1",
    "privileges": [
      "read"
    ],
    "declared_gender": "female",
    "declared_age": 32,
    "created_at": 1786322683.947351,
    "ledger_block": 1,
    "level": null,
    "transactions": 0
  }
];

export const POLICY: PolicyResponse = {
  "finger_threshold": 21474,
  "face_threshold": 0.992,
  "gender_threshold": 0.9,
  "age_tolerance": 10,
  "face_memory_limit_mb": 1024,
  "confidence_gate": 80.0,
  "expected_fpir": 9.999610488302824e-06
};

export const ANALYTICS: AnalyticsResponse = {
  "user_id": "fx-u0",
  "level": 73.0,
  "gate": 80.0,
  "history": [
    {
      "timestamp": 1786322683.9541008,
      "fused": 100.0,
      "level": 100.0,
      "finger": true,
      "face": true,
      "gender": true,
      "age": true
    },
    {
      "timestamp": 1786322683.9599862,
      "fused": 100.0,
      "level": 100.0,
      "finger": true,
      "face": true,
      "gender": true,
      "age": true
    },
    {
      "timestamp": 1786322683.9659693,
      "fused": 100.0,
      "level": 100.0,
      "finger": true,
      "face": true,
      "gender": true,
      "age": true
    },
    {
      "timestamp": 1786322683.9748623,
      "fused": 100.0,
      "level": 100.0,
      "finger": true,
      "face": true,
      "gender": true,
      "age": true
    },
    {
      "timestamp": 1786322683.9799476,
      "fused": 10.0,
      "level": 73.0,
      "finger": false,
      "face": false,
      "gender": false,
      "age": true
    }
  ]
};

export const CHAIN_HEAD: ChainHead = {
  "index": 1,
  "hash": "0091605e4852d9e47f9228a3226a1afe4e32f8d1367d613a4a526d1f643b236d"
};

/** Canonical bytes of the same two-block chain (base64). */
export const CHAIN_B64 = "AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAEAAAAFAAAAZngtdTD7HnlqAAAAAEzMUDBP+80FMm0MgiU5Jqrbsgb2fL5tiV16IMgVntOd+x55agAAAAB7UlpsAAAAAPsCAAAAAAAAAOo3E/v6KNlncZ0ActrMY3Etsw9ijPMJ0eztynRCWCoBAAAAAAAAAADqNxP7+ijZZ3GdAHLazGNxLbMPYozzCdHs7cp0QlgqAQAAAAUAAABmeC11MfseeWoAAAAAgKmbr+WNZvixZ1Ve8Rgp/THj+zx4gvaPwch2MEBENy77HnlqAAAAAHtSWmwAAAAAQgAAAAAAAAAAkWBeSFLZ5H+SKKMiahr+TjL40TZ9YTpKUm0fZDsjbQ==";

export function chainBuffer(): ArrayBuffer {
  const raw = atob(CHAIN_B64);
  const bytes = new Uint8Array(raw.length);
  for (let i = 0; i < raw.length; i++) {
    bytes[i] = raw.charCodeAt(i);
  }
  return bytes.buffer;
}

/** A 100-transaction harness run at good fraction 0.8, seed 9, gate 80. */
export const FIG8_CSV = `transaction_index,fused,level,granted
0,10.0000,10.0000,0
1,100.0000,37.0000,0
2,100.0000,55.9000,0
3,100.0000,69.1300,0
4,100.0000,78.3910,0
5,20.0000,60.8737,0
6,10.0000,45.6116,0
7,20.0000,37.9281,0
8,100.0000,56.5497,0
9,100.0000,69.5848,0
10,100.0000,78.7093,0
11,100.0000,85.0965,1
12,100.0000,89.5676,1
13,10.0000,65.6973,0
14,10.0000,48.9881,0
15,100.0000,64.2917,0
16,100.0000,75.0042,0
17,100.0000,82.5029,1
18,100.0000,87.7520,1
19,100.0000,91.4264,1
20,100.0000,93.9985,1
21,100.0000,95.7990,1
22,0.0000,67.0593,0
23,10.0000,49.9415,0
24,10.0000,37.9590,0
25,10.0000,29.5713,0
26,100.0000,50.6999,0
27,100.0000,65.4900,0
28,0.0000,45.8430,0
29,100.0000,62.0901,0
30,100.0000,73.4631,0
31,100.0000,81.4241,1
32,100.0000,86.9969,1
33,100.0000,90.8978,1
34,100.0000,93.6285,1
35,100.0000,95.5399,1
36,100.0000,96.8780,1
37,10.0000,70.8146,0
38,100.0000,79.5702,0
39,100.0000,85.6991,1
40,100.0000,89.9894,1
41,100.0000,92.9926,1
42,100.0000,95.0948,1
43,100.0000,96.5664,1
44,10.0000,70.5965,0
45,100.0000,79.4175,0
46,100.0000,85.5923,1
47,100.0000,89.9146,1
48,100.0000,92.9402,1
49,100.0000,95.0581,1
50,100.0000,96.5407,1
51,100.0000,97.5785,1
52,100.0000,98.3049,1
53,100.0000,98.8135,1
54,20.0000,75.1694,0
55,100.0000,82.6186,1
56,100.0000,87.8330,1
57,100.0000,91.4831,1
58,100.0000,94.0382,1
59,100.0000,95.8267,1
60,100.0000,97.0787,1
61,100.0000,97.9551,1
62,100.0000,98.5686,1
63,100.0000,98.9980,1
64,100.0000,99.2986,1
65,100.0000,99.5090,1
66,100.0000,99.6563,1
67,100.0000,99.7594,1
68,100.0000,99.8316,1
69,100.0000,99.8821,1
70,100.0000,99.9175,1
71,20.0000,75.9422,0
72,100.0000,83.1596,1
73,100.0000,88.2117,1
74,100.0000,91.7482,1
75,100.0000,94.2237,1
76,100.0000,95.9566,1
77,100.0000,97.1696,1
78,100.0000,98.0187,1
79,100.0000,98.6131,1
80,100.0000,99.0292,1
81,100.0000,99.3204,1
82,100.0000,99.5243,1
83,100.0000,99.6670,1
84,100.0000,99.7669,1
85,100.0000,99.8368,1
86,100.0000,99.8858,1
87,100.0000,99.9200,1
88,100.0000,99.9440,1
89,100.0000,99.9608,1
90,10.0000,72.9726,0
91,100.0000,81.0808,1
92,100.0000,86.7566,1
93,10.0000,63.7296,0
94,100.0000,74.6107,0
95,100.0000,82.2275,1
96,100.0000,87.5593,1
97,20.0000,67.2915,0
98,100.0000,77.1040,0
99,100.0000,83.9728,1
`;

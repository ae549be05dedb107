/**
 * Fixtures captured verbatim from a live gateway replaying the bundled
 * five-sensor scenario (see the backend's test_api suite for the same
 * shapes asserted server-side).
 */

import type { HealthPayload, ReadingPayload, SensorPayload, TicketPayload } from "../src/api.js";

export const HEALTH: HealthPayload = {
  "status": "ok",
  "uptime_ms": 0
};

export const SENSORS: SensorPayload[] = [
  {
    "id": "TEMP102SC",
    "kind": "passive",
    "quantity": "temperature",
    "unit": "Celsius",
    "meaning": "Ambient temperature",
    "lat": 26.0696,
    "lon": -80.1414,
    "period_ms": 1000,
    "noise_sd": 0.0
  },
  {
    "id": "HUM33AGR",
    "kind": "passive",
    "quantity": "humidity",
    "unit": "%",
    "meaning": "Air humidity",
    "lat": 26.0696,
    "lon": -80.1414,
    "period_ms": 1000,
    "noise_sd": 0.0
  },
  {
    "id": "SOIL7AGR",
    "kind": "passive",
    "quantity": "soil_moisture",
    "unit": "%",
    "meaning": "Soil moisture content",
    "lat": 26.0697,
    "lon": -80.1415,
    "period_ms": 1000,
    "noise_sd": 0.0
  },
  {
    "id": "LUX5AGR",
    "kind": "active",
    "quantity": "light",
    "unit": "Lux",
    "meaning": "Ambient light intensity",
    "lat": 26.0698,
    "lon": -80.1413,
    "period_ms": 1000,
    "noise_sd": 0.0
  },
  {
    "id": "PH1AGR",
    "kind": "passive",
    "quantity": "ph",
    "unit": "pH",
    "meaning": "Soil acidity level",
    "lat": 26.0697,
    "lon": -80.1414,
    "period_ms": 1000,
    "noise_sd": 0.0
  }
];

export const READINGS: ReadingPayload[] = [
  {
    "sensor_id": "TEMP102SC",
    "quantity": "temperature",
    "value": 36.78,
    "unit": "Celsius",
    "timestamp": 0,
    "lat": 26.0696,
    "lon": -80.1414,
    "description": "Ambient temperature",
    "keywords": [
      "ambient",
      "temperature"
    ],
    "confidence": 1.0
  },
  {
    "sensor_id": "HUM33AGR",
    "quantity": "humidity",
    "value": 68.49,
    "unit": "%",
    "timestamp": 1000,
    "lat": 26.0696,
    "lon": -80.1414,
    "description": "Air humidity",
    "keywords": [
      "air",
      "humidity"
    ],
    "confidence": 1.0
  },
  {
    "sensor_id": "SOIL7AGR",
    "quantity": "soil_moisture",
    "value": 23.450000000000003,
    "unit": "%",
    "timestamp": 2000,
    "lat": 26.0697,
    "lon": -80.1415,
    "description": "Soil moisture content",
    "keywords": [
      "soil",
      "moisture",
      "content"
    ],
    "confidence": 1.0
  },
  {
    "sensor_id": "LUX5AGR",
    "quantity": "light",
    "value": 281.4,
    "unit": "Lux",
    "timestamp": 3000,
    "lat": 26.0698,
    "lon": -80.1413,
    "description": "Ambient light intensity",
    "keywords": [
      "ambient",
      "light",
      "intensity"
    ],
    "confidence": 1.0
  },
  {
    "sensor_id": "PH1AGR",
    "quantity": "ph",
    "value": 5.9,
    "unit": "pH",
    "timestamp": 4000,
    "lat": 26.0697,
    "lon": -80.1414,
    "description": "Soil acidity level",
    "keywords": [
      "soil",
      "acidity",
      "level"
    ],
    "confidence": 1.0
  }
];

export const PENDING_TICKETS: TicketPayload[] = [
  {
    "ticket_id": "T000001",
    "status": "pending",
    "created_at": 1786344136523,
    "decided_at": null,
    "operator_note": "",
    "recommendation": {
      "action_id": "activate_cooling",
      "condition": "Temperature greater than 35°C",
      "explanation": "Temperature greater than 35°C: Temperature is 36.78°C",
      "confidence": 1.0,
      "source": "rule",
      "alternatives": [
        [
          "adjust_ph",
          1.0
        ],
        [
          "grow_lights_on",
          1.0
        ],
        [
          "irrigate",
          1.0
        ]
      ]
    },
    "evidence": [
      {
        "action_id": "activate_cooling",
        "condition": "Temperature greater than 35°C",
        "explanation": "Temperature greater than 35°C: Temperature is 36.78°C",
        "confidence": 1.0,
        "source": "rule",
        "alternatives": []
      }
    ]
  },
  {
    "ticket_id": "T000002",
    "status": "pending",
    "created_at": 1786344136524,
    "decided_at": null,
    "operator_note": "",
    "recommendation": {
      "action_id": "irrigate",
      "condition": "Soil moisture less than 30%",
      "explanation": "Soil moisture less than 30%: Soil moisture is 23.45% | fuzzy: soil_moisture classified Low: soil_moisture is 23.45 (membership 0.2183; Low=0.2183, Adequate=0.1150, High=0.0000) | dempster_shafer: combined evidence says soil_moisture is Low: soil_moisture is 23.45; 1 source(s) fused, m{Low}=0.2183 m{Low,Adequate,High}=0.7817",
      "confidence": 1.0,
      "source": "rule",
      "alternatives": [
        [
          "activate_cooling",
          1.0
        ],
        [
          "adjust_ph",
          1.0
        ],
        [
          "grow_lights_on",
          1.0
        ]
      ]
    },
    "evidence": [
      {
        "action_id": "irrigate",
        "condition": "Soil moisture less than 30%",
        "explanation": "Soil moisture less than 30%: Soil moisture is 23.45%",
        "confidence": 1.0,
        "source": "rule",
        "alternatives": []
      },
      {
        "action_id": "irrigate",
        "condition": "soil_moisture classified Low",
        "explanation": "soil_moisture classified Low: soil_moisture is 23.45 (membership 0.2183; Low=0.2183, Adequate=0.1150, High=0.0000)",
        "confidence": 0.21833333333333324,
        "source": "fuzzy",
        "alternatives": []
      },
      {
        "action_id": "irrigate",
        "condition": "combined evidence says soil_moisture is Low",
        "explanation": "combined evidence says soil_moisture is Low: soil_moisture is 23.45; 1 source(s) fused, m{Low}=0.2183 m{Low,Adequate,High}=0.7817",
        "confidence": 0.21833333333333324,
        "source": "dempster_shafer",
        "alternatives": []
      }
    ]
  },
  {
    "ticket_id": "T000003",
    "status": "pending",
    "created_at": 1786344136525,
    "decided_at": null,
    "operator_note": "",
    "recommendation": {
      "action_id": "grow_lights_on",
      "condition": "Light level less than 300 Lux",
      "explanation": "Light level less than 300 Lux: Light level is 281.40 Lux",
      "confidence": 1.0,
      "source": "rule",
      "alternatives": [
        [
          "activate_cooling",
          1.0
        ],
        [
          "adjust_ph",
          1.0
        ],
        [
          "irrigate",
          1.0
        ]
      ]
    },
    "evidence": [
      {
        "action_id": "grow_lights_on",
        "condition": "Light level less than 300 Lux",
        "explanation": "Light level less than 300 Lux: Light level is 281.40 Lux",
        "confidence": 1.0,
        "source": "rule",
        "alternatives": []
      }
    ]
  },
  {
    "ticket_id": "T000004",
    "status": "pending",
    "created_at": 1786344136525,
    "decided_at": null,
    "operator_note": "",
    "recommendation": {
      "action_id": "adjust_ph",
      "condition": "Soil pH out of range (6.0-7.5)",
      "explanation": "Soil pH out of range (6.0-7.5): Soil pH is 5.90",
      "confidence": 1.0,
      "source": "rule",
      "alternatives": [
        [
          "activate_cooling",
          1.0
        ],
        [
          "grow_lights_on",
          1.0
        ],
        [
          "irrigate",
          1.0
        ]
      ]
    },
    "evidence": [
      {
        "action_id": "adjust_ph",
        "condition": "Soil pH out of range (6.0-7.5)",
        "explanation": "Soil pH out of range (6.0-7.5): Soil pH is 5.90",
        "confidence": 1.0,
        "source": "rule",
        "alternatives": []
      }
    ]
  }
] as TicketPayload[];

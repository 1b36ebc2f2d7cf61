import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def turn_off(light_id):
    url = f'{BASE}/resource/light/{light_id}'
    payload = {'type': 'light', 'on': {'on': False}}
    resp = requests.put(url, headers=HEADERS, json=payload)
    return resp.json()

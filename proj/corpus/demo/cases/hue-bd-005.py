import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}
PAYLOAD = {'type': 'light'}


def apply_defaults(light_id):
    url = f'{BASE}/resource/light/{light_id}'
    resp = requests.put(url, headers=HEADERS, json=PAYLOAD)
    return resp.json()

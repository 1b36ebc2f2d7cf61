import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def light_state(light_id):
    url = f'{BASE}/resource/light/{light_id}/state'
    resp = requests.get(url, headers=HEADERS)
    return resp.json()
